#pragma once

#include <cstdint>

#include "uzawamg/hierarchy.hpp"
#include "uzawamg/smoother.hpp"

namespace uzawamg {

/// Smoothing rate function eta(nu) = 2^-nu * binom(nu, floor((nu+1)/2)),
/// evaluated exactly; eta(0) = 1.
double eta(int nu);

struct SmoothingNormResult {
  double value = 0.0;   // || A M^nu ||_{L x L}
  bool converged = false;
  int iterations = 0;
  Vector eigvec; // dominant direction, reusable as warm start for nu+1
};

/// || A M^nu ||_{L x L} as the square root of the dominant generalized
/// eigenvalue of (A M^nu)^T L^-1 (A M^nu) x = lambda L x, by power iteration.
/// L^-1 is applied blockwise by CG mass solves; the transpose action uses the
/// adjoint smoother sequence.
SmoothingNormResult smoothing_norm(const StokesHierarchy& hierarchy, int level,
                                   const SmootherSpec& spec, int nu, double tol = 1e-5,
                                   int max_iter = 400, std::uint64_t seed = 777,
                                   const Vector* warm_start = nullptr);

/// Smoother cost of step `step_index` (1-based) in units of one full system
/// matrix-vector product (10 scalar multiplications: 3 each for A, B^T, B and
/// 1 for C). Triangular velocity sweeps count 1.5, pressure sweeps 0.5,
/// diagonal applications 0.
double smoother_step_cost(const SmootherSpec& spec, int step_index);

/// Cumulative smoother cost c_i(nu).
double smoother_cost(const SmootherSpec& spec, int nu);

/// Smoother cost plus the residual evaluation of the surrounding multigrid
/// cycle: c-bar_i(nu) = c_i(nu) + 1.
double mg_cost(const SmootherSpec& spec, int nu);

struct CostModelResult {
  double c_abs = 0.0;    // c_i(nu)
  double c_sm_rel = 0.0; // relative smoother cost, rates read as smoothing norms
  double c_mg_rel = 0.0; // relative multigrid cost, rates read as cycle rates
  bool valid = false;    // false when a rate is outside (0, 1)
};

CostModelResult cost_model(const SmootherSpec& spec, int nu, double measured_rate,
                           const SmootherSpec& ref_spec, int ref_nu, double ref_rate);

} // namespace uzawamg
