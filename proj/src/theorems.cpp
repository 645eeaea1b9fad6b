#include "uzawamg/theorems.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "uzawamg/analysis.hpp"
#include "uzawamg/dense_model.hpp"
#include "uzawamg/kernels.hpp"

namespace uzawamg {

namespace {

using dense::SaddleParts;

constexpr double kMargin = 1.05;     // hypothesis saturation margin
constexpr double kBoundTol = 1e-9;   // numerical slack on inequality checks
constexpr double kIdentityTol = 1e-10;

double norm2(const DenseMatrix& M) { return dense_spectral_norm(M, 1e-11, 20000); }

DenseMatrix sym(const DenseMatrix& M) { return 0.5 * (M + M.transpose()); }

void add_bound(TheoremReport& rep, const std::string& name, const SaddleParts& sp, int nu,
               double lhs, double rhs) {
  TheoremCheck c;
  c.name = name;
  c.n = static_cast<int>(sp.n());
  c.m = static_cast<int>(sp.m());
  c.nu = nu;
  c.lhs = lhs;
  c.rhs = rhs;
  c.pass = lhs <= rhs * (1.0 + kBoundTol) + 1e-13;
  if (!c.pass) ++rep.violations;
  rep.checks.push_back(std::move(c));
}

// || K M^nu || <= bound(nu) for nu = 1..nu_max, powers accumulated on the fly.
template <class Bound>
void check_power_bounds(TheoremReport& rep, const std::string& name, const SaddleParts& sp,
                        const DenseMatrix& K, const DenseMatrix& M, int nu_max, Bound bound) {
  DenseMatrix power = M;
  for (int nu = 1; nu <= nu_max; ++nu) {
    add_bound(rep, name, sp, nu, norm2(K * power), bound(nu));
    if (nu < nu_max) power = M * power;
  }
}

} // namespace

TheoremReport verify_theorems(std::uint64_t seed, const std::vector<std::pair<int, int>>& sizes,
                              int systems_per_size, int nu_max) {
  TheoremReport rep;
  std::mt19937_64 rng(seed);

  for (const auto& [n, m] : sizes) {
    for (int s = 0; s < systems_per_size; ++s) {
      SaddleParts sp;
      DenseMatrix a_ns; // non-symmetric A-hat with A-hat + A-hat^T > A
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 100)
          throw std::runtime_error("verify_theorems: hypothesis construction failed");
        sp = dense::random_saddle(n, m, rng);
        const double shift = 0.05 * sp.A.trace() / n;
        a_ns = 0.5 * sp.A + shift * DenseMatrix::Identity(n, n);
        DenseMatrix skew = dense::random_dense(n, n, rng);
        a_ns += 0.5 * (skew - skew.transpose());
        const Eigen::SelfAdjointEigenSolver<DenseMatrix> gap(sym(2.0 * a_ns - sp.A));
        if (gap.eigenvalues().minCoeff() <= 0.0) continue;
        if (std::abs(a_ns.partialPivLu().determinant()) < 1e-12) continue;
        break;
      }

      const DenseMatrix K = dense::saddle(sp);
      const auto a_lu = sp.A.partialPivLu();
      const auto c_lu = sp.C.partialPivLu();
      const DenseMatrix schur_dual = sp.C + sp.B * a_lu.solve(sp.B.transpose());
      const DenseMatrix schur_primal = sp.A + sp.B.transpose() * c_lu.solve(sp.B);

      // (a) block diagonal: A-hat >= A + B^T C^-1 B and S-hat >= C + B A^-1 B^T
      {
        const DenseMatrix a_hat = kMargin * sym(schur_primal);
        const DenseMatrix s_hat = kMargin * sym(schur_dual);
        const DenseMatrix P = dense::preconditioner(SmootherClass::Diagonal, sp, a_hat, s_hat);
        DenseMatrix D = DenseMatrix::Zero(n + m, n + m);
        D.topLeftCorner(n, n) = a_hat;
        D.bottomRightCorner(m, m) = s_hat;
        const double d_norm = norm2(D);
        check_power_bounds(rep, "P_d smoothing bound", sp, K, dense::iteration_matrix(P, K),
                           nu_max, [&](int nu) { return eta(nu) * d_norm; });

        // norm-estimate lemma with the natural similarity X = D^1/2: both
        // right-hand-side products must dominate ||K M^nu||
        const DenseMatrix X = dense::sqrt_spd(D);
        const DenseMatrix Xinv = X.partialPivLu().solve(DenseMatrix::Identity(n + m, n + m));
        const DenseMatrix M = dense::iteration_matrix(P, K);
        const DenseMatrix Mbar = X * M * Xinv;
        const DenseMatrix I = DenseMatrix::Identity(n + m, n + m);
        const double xtx = norm2(X.transpose() * X);
        const double p_factor = norm2(Xinv.transpose() * P * Xinv);
        const double pa_factor = norm2(Xinv.transpose() * (P - K) * Xinv);
        DenseMatrix mbar_prev = I;   // Mbar^(nu-1)
        DenseMatrix mbar_pow = Mbar; // Mbar^nu
        DenseMatrix m_pow = M;       // M^nu
        for (int nu = 1; nu <= nu_max; ++nu) {
          const double lhs = norm2(K * m_pow);
          add_bound(rep, "norm estimate (first)", sp, nu, lhs,
                    norm2((I - Mbar) * mbar_pow) * p_factor * xtx);
          add_bound(rep, "norm estimate (second)", sp, nu, lhs,
                    norm2((I - Mbar) * mbar_prev) * pa_factor * xtx);
          if (nu < nu_max) {
            mbar_prev = mbar_pow;
            mbar_pow = Mbar * mbar_pow;
            m_pow = M * m_pow;
          }
        }
      }

      // (b) factorization: A-hat >= A, S-hat >= C + B A-hat^-1 B^T
      {
        const DenseMatrix a_hat = kMargin * sp.A;
        const DenseMatrix inner = sp.C + sp.B * a_hat.partialPivLu().solve(sp.B.transpose());
        const DenseMatrix s_hat = kMargin * sym(inner);
        const DenseMatrix P = dense::preconditioner(SmootherClass::Factorization, sp, a_hat, s_hat);
        DenseMatrix D = DenseMatrix::Zero(n + m, n + m);
        D.topLeftCorner(n, n) = a_hat - sp.A;
        D.bottomRightCorner(m, m) = s_hat - inner;
        const double d_norm = norm2(D);
        check_power_bounds(rep, "P_f smoothing bound", sp, K, dense::iteration_matrix(P, K),
                           nu_max, [&](int nu) { return eta(nu - 1) * d_norm; });
      }

      // (c) symmetric: A-hat + A-hat^T > A, S-hat >= C + B A^-1 B^T
      {
        const DenseMatrix s_hat = kMargin * sym(schur_dual);
        const DenseMatrix P = dense::preconditioner(SmootherClass::Symmetric, sp, a_ns, s_hat);
        DenseMatrix U = DenseMatrix::Identity(n + m, n + m);
        U.topRightCorner(n, m) = a_ns.transpose().partialPivLu().solve(sp.B.transpose());
        DenseMatrix D = DenseMatrix::Zero(n + m, n + m);
        D.topLeftCorner(n, n) = dense::symmetrized(a_ns, sp.A);
        D.bottomRightCorner(m, m) = s_hat;
        const double xtx_norm = norm2(U.transpose() * D * U);
        check_power_bounds(rep, "P_s smoothing bound", sp, K, dense::iteration_matrix(P, K),
                           nu_max, [&](int nu) { return eta(nu) * xtx_norm; });
      }

      // (d) lower triangular: A-hat >= A SPD, S-hat >= C + B A^-1 B^T
      {
        const DenseMatrix a_hat = kMargin * sp.A;
        const DenseMatrix s_hat = kMargin * sym(schur_dual);
        const DenseMatrix P = dense::preconditioner(SmootherClass::Lower, sp, a_hat, s_hat);
        DenseMatrix D = DenseMatrix::Zero(n + m, n + m);
        D.topLeftCorner(n, n) = a_hat;
        D.bottomRightCorner(m, m) = s_hat;
        const double d_norm = norm2(D);
        check_power_bounds(rep, "P_l smoothing bound", sp, K, dense::iteration_matrix(P, K),
                           nu_max,
                           [&](int nu) { return std::sqrt(2.0) * eta(nu - 1) * d_norm; });
      }

      // (e) corollary: K = [M R^T; -R N] with both Schur complements <= 1
      {
        DenseMatrix Mb = dense::random_spd(n, rng, 10.0);
        DenseMatrix Nb = dense::random_spd(m, rng, 10.0);
        DenseMatrix R = dense::random_dense(m, n, rng);
        const DenseMatrix sm = Mb + R.transpose() * Nb.partialPivLu().solve(R);
        const DenseMatrix sn = Nb + R * Mb.partialPivLu().solve(R.transpose());
        const double scale = std::max(Eigen::SelfAdjointEigenSolver<DenseMatrix>(sym(sm)).eigenvalues().maxCoeff(),
                                      Eigen::SelfAdjointEigenSolver<DenseMatrix>(sym(sn)).eigenvalues().maxCoeff());
        Mb /= scale;
        Nb /= scale;
        R /= scale;
        DenseMatrix Kc(n + m, n + m);
        Kc.topLeftCorner(n, n) = Mb;
        Kc.topRightCorner(n, m) = R.transpose();
        Kc.bottomLeftCorner(m, n) = -R;
        Kc.bottomRightCorner(m, m) = Nb;
        const DenseMatrix I = DenseMatrix::Identity(n + m, n + m);
        DenseMatrix power = Kc;
        for (int nu = 1; nu <= nu_max; ++nu) {
          add_bound(rep, "corollary (I-K)K^nu", sp, nu, norm2((I - Kc) * power), eta(nu));
          if (nu < nu_max) power = Kc * power;
        }
      }

      // product preconditioner identity: I - P_sym^-1 K = (I - P_u^-1 K)(I - P_l^-1 K)
      {
        const DenseMatrix a_hat = kMargin * sp.A;
        const DenseMatrix s_hat = kMargin * sym(schur_dual);
        const DenseMatrix Pl = dense::preconditioner(SmootherClass::Lower, sp, a_hat, s_hat);
        const DenseMatrix Pu = dense::preconditioner(SmootherClass::Upper, sp, a_hat, s_hat);
        // P_sym from the factored form with S_s = S(S + S^T - C)^-1 S^T
        DenseMatrix lower = DenseMatrix::Identity(n + m, n + m);
        lower.bottomLeftCorner(m, n) =
            sp.B * a_hat.partialPivLu().solve(DenseMatrix::Identity(n, n));
        DenseMatrix mid = DenseMatrix::Zero(n + m, n + m);
        mid.topLeftCorner(n, n) = dense::symmetrized(a_hat, sp.A);
        mid.bottomRightCorner(m, m) = -dense::symmetrized(s_hat, sp.C);
        const DenseMatrix Psym = lower * mid * lower.transpose();
        const DenseMatrix left = dense::iteration_matrix(Psym, K);
        const DenseMatrix right =
            dense::iteration_matrix(Pu, K) * dense::iteration_matrix(Pl, K);
        const double err = (left - right).cwiseAbs().maxCoeff();
        add_bound(rep, "P_sym product identity", sp, 1, err, kIdentityTol * norm2(K));
      }

      // A_r^-1 representation for the non-symmetric A-hat
      {
        const DenseMatrix a_r =
            a_ns.transpose() * (a_ns + a_ns.transpose() - sp.A).partialPivLu().solve(a_ns);
        const DenseMatrix lhs = a_r.partialPivLu().solve(DenseMatrix::Identity(n, n));
        const DenseMatrix ia = a_ns.partialPivLu().solve(sp.A);
        const DenseMatrix iat = DenseMatrix(sp.A * a_ns.transpose().partialPivLu().solve(
                                                DenseMatrix::Identity(n, n)));
        const DenseMatrix I = DenseMatrix::Identity(n, n);
        const DenseMatrix rhs =
            a_lu.solve(I) - (I - ia) * a_lu.solve(DenseMatrix(I - iat));
        const double err = (lhs - rhs).cwiseAbs().maxCoeff();
        add_bound(rep, "A_r inverse identity", sp, 1, err, kIdentityTol * norm2(lhs));
      }

      // iteration-matrix relation: M_l(H_s, S)^nu = M2 M1(H^T) M_s(H^T, S)^{nu-1} M1(H)
      {
        const DenseMatrix H = sp.A.triangularView<Eigen::Lower>();
        const DenseMatrix h_s = dense::symmetrized(H, sp.A);
        const DenseMatrix s_hat = kMargin * sym(schur_dual);
        const DenseMatrix Pl = dense::preconditioner(SmootherClass::Lower, sp, h_s, s_hat);
        const DenseMatrix Ps =
            dense::preconditioner(SmootherClass::Symmetric, sp, DenseMatrix(H.transpose()), s_hat);
        const DenseMatrix Ml = dense::iteration_matrix(Pl, K);
        const DenseMatrix Ms = dense::iteration_matrix(Ps, K);
        const DenseMatrix M2S = dense::m2(s_hat, sp);
        const DenseMatrix M1Ht = dense::m1(DenseMatrix(H.transpose()), sp);
        const DenseMatrix M1H = dense::m1(H, sp);
        for (int nu : {1, 2, 3, 5}) {
          if (nu > nu_max) continue;
          DenseMatrix left = DenseMatrix::Identity(n + m, n + m);
          for (int k = 0; k < nu; ++k) left = Ml * left;
          DenseMatrix ms_pow = DenseMatrix::Identity(n + m, n + m);
          for (int k = 0; k < nu - 1; ++k) ms_pow = Ms * ms_pow;
          const DenseMatrix right = M2S * M1Ht * ms_pow * M1H;
          const double err = (left - right).cwiseAbs().maxCoeff();
          add_bound(rep, "M_l/M_s relation", sp, nu, err, kIdentityTol);
        }
      }

      // Braess-Sarazin is the factorization class with A-hat = alpha diag A
      {
        const double alpha = 1.2;
        const DenseMatrix d_alpha = alpha * sp.A.diagonal().asDiagonal();
        const DenseMatrix s_bs =
            sp.C + sp.B * d_alpha.partialPivLu().solve(sp.B.transpose());
        const DenseMatrix Pbs = dense::preconditioner(SmootherClass::BraessSarazin, sp,
                                                      DenseMatrix(), DenseMatrix(), alpha);
        const DenseMatrix Pf =
            dense::preconditioner(SmootherClass::Factorization, sp, d_alpha, s_bs);
        const double err = (Pbs - Pf).cwiseAbs().maxCoeff();
        add_bound(rep, "Braess-Sarazin = P_f(D_a, C+BD_a^-1B^T)", sp, 1, err,
                  kIdentityTol * norm2(Pbs));
      }
    }
  }
  return rep;
}

} // namespace uzawamg
