#pragma once

#include <functional>

#include "uzawamg/mesh.hpp"
#include "uzawamg/types.hpp"

namespace uzawamg {

/// Discrete saddle point system [ A  B^T ; B  -C ] (u, p) = (f, g) on one
/// level. Velocity DoFs are the interior vertices, component-major (all x
/// values, then y, then z); pressure keeps every vertex. B carries the
/// divergence form b(u,q) = -<div u, q>, C the PSPG stabilization.
struct SaddlePointSystem {
  SparseMatrix A;   // velocity stiffness, 3 identical diagonal blocks
  SparseMatrix B;   // m x n
  SparseMatrix B_T; // n x m, explicit transpose of B
  SparseMatrix C;   // stabilization, positive semi-definite, kernel = constants
  Vector f;
  Vector g;
  Index n_velocity_dofs = 0;
  Index n_pressure_dofs = 0;
  Index n_scalar_interior = 0;
};

using ForcingFunction = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

/// PSPG stabilization parameter; 1/12 is the standard practical choice.
inline constexpr double kStabilizationDelta = 1.0 / 12.0;

SaddlePointSystem assemble_system(const MeshLevel& mesh, const ForcingFunction& forcing = {});

struct MassMatrices {
  SparseMatrix Mv; // consistent P1 mass on interior vertices (one component)
  SparseMatrix Mq; // consistent P1 mass on all vertices
};

MassMatrices assemble_mass(const MeshLevel& mesh);

/// Residual of the saddle system at state x = [u; p] against rhs (f, g).
Vector saddle_apply(const SaddlePointSystem& sys, const Vector& x);
Vector saddle_residual(const SaddlePointSystem& sys, const Vector& x, const Vector& f,
                       const Vector& g);

/// Block-diagonal SPD matrix L = diag(h^-2 M_v, M_q) representing the
/// mesh-dependent norm, with a lumped-mass diagnostics mode.
class NormOperator {
public:
  NormOperator(const MeshLevel& mesh, MassMatrices mass, bool lumped = false);

  Vector apply(const Vector& x) const;          // L x
  Vector inverse_apply(const Vector& r) const;  // L^-1 r, blockwise CG at 1e-10
  double value(const Vector& x) const;          // ||x||_L
  double dual_value(const Vector& r) const;     // ||r||_{L^-1}
  double pressure_mean(const Vector& p) const;  // (1^T M_q p) / (1^T M_q 1)

  const SparseMatrix& Mv() const { return mass_.Mv; }
  const SparseMatrix& Mq() const { return mass_.Mq; }
  double h_scale() const { return h_scale_; }
  bool lumped() const { return lumped_; }
  Index n_velocity() const { return 3 * mass_.Mv.rows(); }
  Index n_pressure() const { return mass_.Mq.rows(); }

private:
  MassMatrices mass_;
  double h_scale_; // h_l^-2
  bool lumped_;
  Vector mv_lumped_;
  Vector mq_lumped_; // also the weights 1^T M_q of the mean functional
  double mq_total_;
};

} // namespace uzawamg
