#pragma once

#include "uzawamg/mesh.hpp"
#include "uzawamg/types.hpp"

namespace uzawamg {

/// Nodal interpolation between nested P1 spaces. The velocity block is stored
/// once per scalar component (the three components share it); restriction is
/// the transpose and never stored.
struct TransferOperator {
  SparseMatrix velocity; // fine interior x coarse interior, one component
  SparseMatrix pressure; // fine vertices x coarse vertices
};

TransferOperator build_transfer(const MeshLevel& coarse, const MeshLevel& fine);

/// Block application over the three stacked velocity components.
Vector prolongate_velocity(const TransferOperator& t, const Vector& coarse);
Vector restrict_velocity(const TransferOperator& t, const Vector& fine);

} // namespace uzawamg
