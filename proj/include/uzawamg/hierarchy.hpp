#pragma once

#include <vector>

#include "uzawamg/assembly.hpp"
#include "uzawamg/mesh.hpp"
#include "uzawamg/transfer.hpp"

namespace uzawamg {

/// Fully assembled nested hierarchy: meshes, level systems (re-assembled per
/// level, the stabilization is level-dependent), norm operators and the
/// inter-level transfers. Immutable after construction.
struct StokesHierarchy {
  MeshHierarchy meshes;
  std::vector<SaddlePointSystem> systems;
  std::vector<NormOperator> norms;
  std::vector<TransferOperator> transfers; // transfers[l] maps level l -> l+1

  int max_level() const { return meshes.max_level(); }
  const SaddlePointSystem& system(int level) const { return systems.at(level); }
  const NormOperator& norm(int level) const { return norms.at(level); }
};

StokesHierarchy build_stokes_hierarchy(int max_level, const ForcingFunction& forcing = {},
                                       bool lumped = false);

} // namespace uzawamg
