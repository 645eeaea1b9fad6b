#pragma once

#include <cstdint>
#include <vector>

#include "uzawamg/assembly.hpp"
#include "uzawamg/types.hpp"

namespace uzawamg {

enum class SmootherClass { Diagonal, Lower, Upper, Factorization, Symmetric, BraessSarazin };
enum class AHatKind { Jacobi, ForwardGS, BackwardGS, SymmetricGS };
enum class SHatKind { DampedJacobiMass, DampedGSC, DampedSymGSC };

/// Declarative choice of block preconditioner class, the velocity and
/// pressure approximations A-hat and S-hat, and the damping.
struct SmootherSpec {
  SmootherClass cls = SmootherClass::Lower;
  AHatKind a_hat = AHatKind::SymmetricGS;
  SHatKind s_hat = SHatKind::DampedJacobiMass;
  double omega = 0.55849;
  double alpha = 1.0; // Braess-Sarazin only

  bool a_hat_symmetric() const {
    return a_hat == AHatKind::Jacobi || a_hat == AHatKind::SymmetricGS;
  }
};

const char* to_string(SmootherClass cls);
const char* to_string(AHatKind kind);
const char* to_string(SHatKind kind);

/// Throws if the spec violates the class requirements (the triangular classes
/// need a symmetric positive definite A-hat).
void validate_spec(const SmootherSpec& spec);

/// Runnable realization of one preconditioner over an assembled system.
/// Instances never mutate the system; one instance is single-consumer.
class Smoother {
public:
  Smoother(const SaddlePointSystem& sys, const SparseMatrix& Mq, SmootherSpec spec);

  const SmootherSpec& spec() const { return spec_; }
  const SaddlePointSystem& system() const { return *sys_; }

  /// A-hat^-1 r (velocity space); `transposed` swaps forward and backward.
  Vector apply_a_hat_inverse(const Vector& r, bool transposed = false) const;
  /// S-hat^-1 r (pressure space), including the omega damping.
  Vector apply_s_hat_inverse(const Vector& r, bool transposed = false) const;

  /// One smoothing step of the class sequence (in place on u, p).
  void step(Vector& u, Vector& p, const Vector& f, const Vector& g, bool adjoint = false) const;

  /// (du, dp) = P^-1 (ru, rp) via the factored block formulas; this is an
  /// algebraically independent route from step().
  void apply_preconditioner_inverse(const Vector& ru, const Vector& rp, Vector& du, Vector& dp,
                                    bool transposed = false) const;

  /// M e and M^T e for the iteration matrix M = I - P^-1 A.
  Vector iteration_operator_apply(const Vector& e) const;
  Vector iteration_operator_transpose_apply(const Vector& e) const;

  const Vector& diag_A() const { return diag_A_; }
  const Vector& diag_Mq() const { return diag_Mq_; }
  const SparseMatrix& Mq() const { return *Mq_; }

private:
  const SparseMatrix& c_sweep_matrix() const;
  Vector symgs_a_inverse(const Vector& r) const;
  Vector schur_solve(const Vector& rhs) const; // Braess-Sarazin inner solve

  const SaddlePointSystem* sys_;
  const SparseMatrix* Mq_;
  SmootherSpec spec_;
  Vector diag_A_;
  Vector diag_Mq_;
  Vector diag_C_;       // guarded: max(C_ii, 1e-14)
  SparseMatrix C_patch_; // only materialized when C needs the diagonal guard
  bool use_patch_ = false;
  bool schur_singular_ = false; // constants in the kernel of C + B D^-1 B^T
};

struct OmegaResult {
  double omega = 1.0;
  double lambda_max = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

/// Damping parameter from the generalized eigenvalue problem
/// (diag M_q)^-1 (C + B A_s^-1 B^T) q = lambda q via power iteration with the
/// constant-pressure direction deflated. omega = min(1/lambda_max, omega_max).
OmegaResult compute_omega(const SaddlePointSystem& sys, const SparseMatrix& Mq, double tol = 1e-6,
                          int max_iter = 200, std::uint64_t seed = 1234,
                          double omega_max = 1.0);

struct ConditionReport {
  double lambda_a_hat = 0.0; // lambda_max(X^-1 A), X the symmetric realization
  bool a_hat_ok = false;
  double lambda_schur = 0.0; // lambda_max((diag Mq)^-1 (C + B A_s^-1 B^T))
  double schur_margin = 0.0; // 1/omega - lambda_schur
  bool schur_ok = false;
};

/// Numerical certificates for the theorem conditions; reports margins, never
/// throws on violations.
ConditionReport validate_conditions(const Smoother& s, double tol = 1e-6, int max_iter = 200,
                                    std::uint64_t seed = 4321);

} // namespace uzawamg
