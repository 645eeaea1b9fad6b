#pragma once

#include <Eigen/LU>
#include <cstdint>
#include <memory>
#include <vector>

#include "uzawamg/hierarchy.hpp"
#include "uzawamg/smoother.hpp"

namespace uzawamg {

enum class PostSmoother { Same, Adjoint };

struct CycleSpec {
  int gamma = 2; // 1 = V-cycle, 2 = W-cycle
  int nu = 6;    // total smoothing steps, split nu - nu/2 pre, nu/2 post
  PostSmoother post_smoother = PostSmoother::Same;
  int coarse_level = 0;
  int max_iterations = 100;
  double epsilon = 1e-8;
  std::uint64_t seed = 20240521;

  int pre_steps() const { return nu - nu / 2; }
  int post_steps() const { return nu / 2; }
};

struct TraceEntry {
  int iteration;
  double dual_norm;
  double wall_seconds;
};

struct SolveResult {
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  double final_rate = 0.0; // last residual ratio
  std::vector<TraceEntry> trace;
};

struct RateResult {
  double rate = 0.0;
  bool enough_ratios = false; // false: error underflowed before 5 usable ratios
  int cycles = 0;
  std::vector<double> ratios; // the ratios entering the geometric mean
};

/// V-/W-cycle driver over a hierarchy with one smoother instance per level
/// and a cached dense factorization of the coarse saddle problem (bordered by
/// the zero-mean pressure constraint).
class Multigrid {
public:
  Multigrid(const StokesHierarchy& hierarchy, const SmootherSpec& smoother_spec, int top_level,
            CycleSpec cycle);

  const CycleSpec& cycle_spec() const { return cycle_; }
  int top_level() const { return top_level_; }
  const Smoother& smoother(int level) const { return *smoothers_.at(level); }

  /// One multigrid cycle at `level` applied to the state (u, p).
  void cycle(int level, Vector& u, Vector& p, const Vector& f, const Vector& g) const;

  /// Exact coarse solve with the pressure mean pinned by a Lagrange multiplier.
  void coarse_solve(const Vector& f, const Vector& g, Vector& u, Vector& p) const;

  /// Full solve from a seeded random start; stops when the residual dual norm
  /// drops by epsilon, flags divergence at 1e6 times the initial residual.
  SolveResult solve(const Vector* f = nullptr, const Vector* g = nullptr) const;

  /// Asymptotic L-norm contraction rate on the homogeneous problem: geometric
  /// mean of the last 5 per-cycle error ratios inside the measurement window.
  RateResult asymptotic_rate(int max_cycles = 400) const;

private:
  const StokesHierarchy* hier_;
  CycleSpec cycle_;
  int top_level_;
  std::vector<std::unique_ptr<Smoother>> smoothers_; // index = level
  Eigen::PartialPivLU<DenseMatrix> coarse_lu_;
};

} // namespace uzawamg
