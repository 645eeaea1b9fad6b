#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uzawamg/types.hpp"

namespace uzawamg {

struct TheoremCheck {
  std::string name;
  int n = 0;
  int m = 0;
  int nu = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double slack() const { return rhs - lhs; }
};

struct TheoremReport {
  std::vector<TheoremCheck> checks;
  int violations = 0;
  bool all_pass() const { return violations == 0; }
};

/// Verifies the smoothing-property bounds of the four analyzed classes, the
/// Schur-complement corollary, the norm-estimate lemma, and the structural
/// identities (product preconditioner, A_r inverse representation, the
/// triangular/symmetric iteration-matrix relation, and the Braess-Sarazin
/// equivalence) on random dense systems whose hypotheses are constructed to
/// hold with margin.
TheoremReport verify_theorems(std::uint64_t seed,
                              const std::vector<std::pair<int, int>>& sizes = {
                                  {8, 4}, {12, 6}, {20, 10}, {30, 15}, {40, 20}},
                              int systems_per_size = 4, int nu_max = 10);

} // namespace uzawamg
