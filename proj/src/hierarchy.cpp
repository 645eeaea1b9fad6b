#include "uzawamg/hierarchy.hpp"

namespace uzawamg {

StokesHierarchy build_stokes_hierarchy(int max_level, const ForcingFunction& forcing,
                                       bool lumped) {
  StokesHierarchy h;
  h.meshes = build_hierarchy(max_level);
  h.systems.reserve(max_level + 1);
  h.norms.reserve(max_level + 1);
  for (int l = 0; l <= max_level; ++l) {
    const MeshLevel& mesh = h.meshes.levels[l];
    h.systems.push_back(assemble_system(mesh, forcing));
    h.norms.emplace_back(mesh, assemble_mass(mesh), lumped);
    if (l > 0) h.transfers.push_back(build_transfer(h.meshes.levels[l - 1], mesh));
  }
  return h;
}

} // namespace uzawamg
