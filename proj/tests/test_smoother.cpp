#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "uzawamg/dense_model.hpp"
#include "uzawamg/hierarchy.hpp"
#include "uzawamg/kernels.hpp"
#include "uzawamg/smoother.hpp"

using namespace uzawamg;

namespace {

const std::vector<SmootherClass> kAllClasses = {
    SmootherClass::Diagonal,      SmootherClass::Lower,     SmootherClass::Upper,
    SmootherClass::Factorization, SmootherClass::Symmetric, SmootherClass::BraessSarazin};

SmootherSpec make_spec(SmootherClass cls, double omega = 0.7) {
  SmootherSpec spec;
  spec.cls = cls;
  spec.a_hat = cls == SmootherClass::Symmetric ? AHatKind::BackwardGS : AHatKind::SymmetricGS;
  spec.s_hat = SHatKind::DampedSymGSC; // exercises a non-trivial S-hat
  spec.omega = omega;
  spec.alpha = 1.3;
  return spec;
}

// dense S-hat matrix matching the sparse realization on system sp
DenseMatrix dense_s_hat(const SmootherSpec& spec, const dense::SaddleParts& sp,
                        const DenseMatrix& Mq) {
  switch (spec.s_hat) {
    case SHatKind::DampedJacobiMass:
      return DenseMatrix(Mq.diagonal().asDiagonal()) / spec.omega;
    case SHatKind::DampedGSC:
      return DenseMatrix(sp.C.triangularView<Eigen::Lower>()) / spec.omega;
    case SHatKind::DampedSymGSC: {
      const DenseMatrix L = sp.C.triangularView<Eigen::Lower>();
      return L * DenseMatrix(sp.C.diagonal().asDiagonal()).inverse() * L.transpose() / spec.omega;
    }
  }
  throw std::logic_error("unknown s_hat");
}

DenseMatrix dense_a_hat(const SmootherSpec& spec, const dense::SaddleParts& sp) {
  const DenseMatrix L = sp.A.triangularView<Eigen::Lower>();
  switch (spec.a_hat) {
    case AHatKind::Jacobi: return DenseMatrix(sp.A.diagonal().asDiagonal());
    case AHatKind::ForwardGS: return L;
    case AHatKind::BackwardGS: return L.transpose();
    case AHatKind::SymmetricGS:
      return L * DenseMatrix(sp.A.diagonal().asDiagonal()).inverse() * L.transpose();
  }
  throw std::logic_error("unknown a_hat");
}

DenseMatrix dense_preconditioner(const SmootherSpec& spec, const dense::SaddleParts& sp,
                                 const DenseMatrix& Mq) {
  return dense::preconditioner(spec.cls, sp, dense_a_hat(spec, sp), dense_s_hat(spec, sp, Mq),
                               spec.alpha);
}

} // namespace

TEST_CASE("spec invariants are enforced at construction") {
  SmootherSpec bad;
  bad.cls = SmootherClass::Lower;
  bad.a_hat = AHatKind::ForwardGS; // not symmetric
  CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
  bad.a_hat = AHatKind::SymmetricGS;
  bad.omega = 0.0;
  CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
  SmootherSpec sym = make_spec(SmootherClass::Symmetric);
  CHECK_NOTHROW(validate_spec(sym)); // backward GS is allowed here
}

TEST_CASE("a_hat kinds coincide on diagonal A") {
  std::mt19937_64 rng(3);
  dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  sp.A = DenseMatrix(Vector::LinSpaced(8, 1.0, 3.0).asDiagonal());
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(4, rng));
  const Vector r = random_vector(8, 5, -1.0, 1.0);
  Vector ref;
  for (AHatKind kind :
       {AHatKind::Jacobi, AHatKind::ForwardGS, AHatKind::BackwardGS, AHatKind::SymmetricGS}) {
    SmootherSpec spec = make_spec(SmootherClass::Symmetric);
    spec.a_hat = kind;
    const Smoother s(sys, mq, spec);
    const Vector x = s.apply_a_hat_inverse(r);
    if (ref.size() == 0)
      ref = x;
    else
      CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("symmetric GS matches the dense A_s oracle and is self-adjoint") {
  std::mt19937_64 rng(17);
  const dense::SaddleParts sp = dense::random_saddle(10, 5, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(5, rng));
  SmootherSpec spec = make_spec(SmootherClass::Lower);
  const Smoother s(sys, mq, spec);

  const DenseMatrix L = sp.A.triangularView<Eigen::Lower>();
  const DenseMatrix a_s = L * (L + L.transpose() - sp.A).inverse() * L.transpose();
  const DenseMatrix a_s_inv = a_s.inverse();

  const Vector r = random_vector(10, 7, -1.0, 1.0);
  CHECK((s.apply_a_hat_inverse(r) - a_s_inv * r).cwiseAbs().maxCoeff() < 1e-11);

  const Vector x = random_vector(10, 8, -1.0, 1.0);
  const Vector y = random_vector(10, 9, -1.0, 1.0);
  CHECK(s.apply_a_hat_inverse(x).dot(y) ==
        doctest::Approx(x.dot(s.apply_a_hat_inverse(y))).epsilon(1e-12));
}

TEST_CASE("damped Jacobi on the pressure mass diagonal") {
  const MeshLevel mesh = build_mesh_level(0);
  const SaddlePointSystem sys = assemble_system(mesh);
  const MassMatrices mass = assemble_mass(mesh);
  SmootherSpec spec; // lower / symmetric GS / damped Jacobi mass
  spec.omega = 0.55849;
  const Smoother s(sys, mass.Mq, spec);
  Vector e = Vector::Zero(sys.n_pressure_dofs);
  e[10] = 1.0;
  const Vector out = s.apply_s_hat_inverse(e);
  CHECK(out[10] == doctest::Approx(0.55849 / s.diag_Mq()[10]).epsilon(1e-14));
  CHECK(out.cwiseAbs().sum() == doctest::Approx(std::abs(out[10])).epsilon(1e-14));
}

TEST_CASE("s_hat kinds coincide for omega=1 and diagonal C") {
  std::mt19937_64 rng(23);
  dense::SaddleParts sp = dense::random_saddle(6, 5, rng);
  sp.C = DenseMatrix(Vector::LinSpaced(5, 0.5, 2.0).asDiagonal());
  const SaddlePointSystem sys = dense::to_system(sp);
  // mass with the same diagonal so the Jacobi variant coincides too
  const SparseMatrix mq = dense::to_sparse(sp.C);
  const Vector r = random_vector(5, 2, -1.0, 1.0);
  Vector ref;
  for (SHatKind kind : {SHatKind::DampedJacobiMass, SHatKind::DampedGSC, SHatKind::DampedSymGSC}) {
    SmootherSpec spec = make_spec(SmootherClass::Lower, 1.0);
    spec.s_hat = kind;
    const Smoother s(sys, mq, spec);
    const Vector x = s.apply_s_hat_inverse(r);
    if (ref.size() == 0)
      ref = x;
    else
      CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("damped symmetric GS on C matches the dense preconditioner oracle") {
  std::mt19937_64 rng(29);
  const dense::SaddleParts sp = dense::random_saddle(6, 12, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(12, rng));
  SmootherSpec spec = make_spec(SmootherClass::Lower, 0.23);
  spec.s_hat = SHatKind::DampedSymGSC;
  const Smoother s(sys, mq, spec);

  const DenseMatrix L = sp.C.triangularView<Eigen::Lower>();
  const DenseMatrix s_tilde =
      L * (L + L.transpose() - sp.C).inverse() * L.transpose() / spec.omega;
  const Vector r = random_vector(12, 4, -1.0, 1.0);
  CHECK((s.apply_s_hat_inverse(r) - s_tilde.inverse() * r).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("zero residual leaves the iterate unchanged for every class") {
  std::mt19937_64 rng(41);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(4, rng));
  const Vector u0 = random_vector(8, 1, -1.0, 1.0);
  const Vector p0 = random_vector(4, 2, -1.0, 1.0);
  Vector state(12);
  state << u0, p0;
  const Vector rhs = dense::saddle(sp) * state;
  for (SmootherClass cls : kAllClasses) {
    const Smoother s(sys, mq, make_spec(cls));
    Vector u = u0, p = p0;
    s.step(u, p, rhs.head(8), rhs.tail(4));
    CHECK((u - u0).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((p - p0).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("one step equals the dense preconditioned update for every class") {
  std::mt19937_64 rng(43);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const DenseMatrix mq_dense = dense::random_spd(4, rng);
  const SparseMatrix mq = dense::to_sparse(mq_dense);
  const DenseMatrix K = dense::saddle(sp);

  for (SmootherClass cls : kAllClasses) {
    const SmootherSpec spec = make_spec(cls);
    const Smoother s(sys, mq, spec);
    const Vector u0 = random_vector(8, 10, -1.0, 1.0);
    const Vector p0 = random_vector(4, 11, -1.0, 1.0);
    const Vector f = random_vector(8, 12, -1.0, 1.0);
    const Vector g = random_vector(4, 13, -1.0, 1.0);

    Vector u = u0, p = p0;
    s.step(u, p, f, g);

    Vector state(12), rhs(12);
    state << u0, p0;
    rhs << f, g;
    const DenseMatrix P = dense_preconditioner(spec, sp, mq_dense);
    const Vector expected = state + P.partialPivLu().solve(rhs - K * state);
    Vector got(12);
    got << u, p;
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("step and the factored preconditioner path agree") {
  std::mt19937_64 rng(47);
  const dense::SaddleParts sp = dense::random_saddle(9, 5, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(5, rng));
  for (SmootherClass cls : kAllClasses) {
    const Smoother s(sys, mq, make_spec(cls));
    const Vector e = random_vector(14, 21, -1.0, 1.0);
    // e - M e must equal P^-1 (A e) computed on the independent path
    const Vector me = s.iteration_operator_apply(e);
    const Vector ae = saddle_apply(sys, e);
    Vector du, dp;
    s.apply_preconditioner_inverse(ae.head(9), ae.tail(5), du, dp);
    Vector pae(14);
    pae << du, dp;
    CHECK((e - me - pae).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("iteration operator and its transpose match dense constructions") {
  std::mt19937_64 rng(53);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const DenseMatrix mq_dense = dense::random_spd(4, rng);
  const SparseMatrix mq = dense::to_sparse(mq_dense);
  const DenseMatrix K = dense::saddle(sp);

  for (SmootherClass cls : kAllClasses) {
    const SmootherSpec spec = make_spec(cls);
    const Smoother s(sys, mq, spec);
    const DenseMatrix P = dense_preconditioner(spec, sp, mq_dense);
    const DenseMatrix M = dense::iteration_matrix(P, K);
    const Vector e = random_vector(12, 31, -1.0, 1.0);
    CHECK((s.iteration_operator_apply(e) - M * e).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((s.iteration_operator_transpose_apply(e) - M.transpose() * e).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(s.iteration_operator_apply(Vector::Zero(12)).norm() == 0.0);
  }
}

TEST_CASE("exact-block lower Uzawa is nilpotent of index two") {
  std::mt19937_64 rng(59);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const DenseMatrix K = dense::saddle(sp);
  const DenseMatrix schur = sp.C + sp.B * sp.A.inverse() * sp.B.transpose();
  const DenseMatrix P = dense::preconditioner(SmootherClass::Lower, sp, sp.A, schur);
  const DenseMatrix M = dense::iteration_matrix(P, K);
  CHECK((M * M).cwiseAbs().maxCoeff() < 1e-10);

  // two fixed-point steps from any start reach the exact solution
  const Vector rhs = random_vector(12, 61, -1.0, 1.0);
  const Vector exact = K.partialPivLu().solve(rhs);
  Vector x = random_vector(12, 62, -1.0, 1.0);
  const auto plu = P.partialPivLu();
  for (int k = 0; k < 2; ++k) x += plu.solve(rhs - K * x);
  CHECK((x - exact).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exact-block factorization solves in one step") {
  std::mt19937_64 rng(67);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const DenseMatrix K = dense::saddle(sp);
  const DenseMatrix schur = sp.C + sp.B * sp.A.inverse() * sp.B.transpose();
  const DenseMatrix P = dense::preconditioner(SmootherClass::Factorization, sp, sp.A, schur);
  const Vector rhs = random_vector(12, 68, -1.0, 1.0);
  const Vector exact = K.partialPivLu().solve(rhs);
  Vector x = random_vector(12, 69, -1.0, 1.0);
  x += P.partialPivLu().solve(rhs - K * x);
  CHECK((x - exact).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Braess-Sarazin step equals the factorization step with exact inner blocks") {
  std::mt19937_64 rng(71);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(4, rng));
  SmootherSpec spec;
  spec.cls = SmootherClass::BraessSarazin;
  spec.alpha = 1.3;
  const Smoother s(sys, mq, spec);

  const DenseMatrix d_alpha = spec.alpha * sp.A.diagonal().asDiagonal();
  const DenseMatrix s_bs = sp.C + sp.B * d_alpha.inverse() * sp.B.transpose();
  const DenseMatrix P = dense::preconditioner(SmootherClass::Factorization, sp, d_alpha, s_bs);
  const DenseMatrix K = dense::saddle(sp);

  Vector u = random_vector(8, 72, -1.0, 1.0);
  Vector p = random_vector(4, 73, -1.0, 1.0);
  const Vector f = random_vector(8, 74, -1.0, 1.0);
  const Vector g = random_vector(4, 75, -1.0, 1.0);
  Vector state(12), rhs(12);
  state << u, p;
  rhs << f, g;
  const Vector expected = state + P.partialPivLu().solve(rhs - K * state);
  s.step(u, p, f, g);
  Vector got(12);
  got << u, p;
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-8); // inner CG at 1e-10
}

TEST_CASE("P_s inverse application is symmetric") {
  std::mt19937_64 rng(79);
  const dense::SaddleParts sp = dense::random_saddle(8, 4, rng);
  const SaddlePointSystem sys = dense::to_system(sp);
  const SparseMatrix mq = dense::to_sparse(dense::random_spd(4, rng));
  SmootherSpec spec = make_spec(SmootherClass::Symmetric);
  spec.s_hat = SHatKind::DampedJacobiMass; // symmetric S-hat
  const Smoother s(sys, mq, spec);
  const Vector x = random_vector(12, 80, -1.0, 1.0);
  const Vector y = random_vector(12, 81, -1.0, 1.0);
  Vector du, dp;
  s.apply_preconditioner_inverse(x.head(8), x.tail(4), du, dp);
  Vector px(12);
  px << du, dp;
  s.apply_preconditioner_inverse(y.head(8), y.tail(4), du, dp);
  Vector py(12);
  py << du, dp;
  CHECK(px.dot(y) == doctest::Approx(x.dot(py)).epsilon(1e-12));
}

TEST_CASE("compute_omega: degenerate and synthetic dense cases") {
  std::mt19937_64 rng(83);
  // C = 0, B = 0: the operator vanishes, omega capped at 1
  dense::SaddleParts sp = dense::random_saddle(6, 3, rng);
  sp.B.setZero();
  sp.C.setZero();
  const SaddlePointSystem degenerate = dense::to_system(sp);
  const SparseMatrix mq0 = dense::to_sparse(dense::random_spd(3, rng));
  const auto r0 = compute_omega(degenerate, mq0);
  CHECK(r0.omega == doctest::Approx(1.0));
  CHECK(r0.lambda_max == doctest::Approx(0.0));

  // 6+3 synthetic system against the dense generalized eigenvalue oracle
  const dense::SaddleParts sp2 = dense::random_saddle(6, 3, rng);
  const SaddlePointSystem sys2 = dense::to_system(sp2);
  const DenseMatrix mq_dense = dense::random_spd(3, rng);
  const SparseMatrix mq = dense::to_sparse(mq_dense);
  const auto r = compute_omega(sys2, mq, 1e-10, 5000);
  const DenseMatrix L = sp2.A.triangularView<Eigen::Lower>();
  const DenseMatrix a_s = L * (L + L.transpose() - sp2.A).inverse() * L.transpose();
  const DenseMatrix H = sp2.C + sp2.B * a_s.inverse() * sp2.B.transpose();
  const double ref =
      dense::lambda_max_generalized(H, DenseMatrix(mq_dense.diagonal().asDiagonal()));
  CHECK(std::abs(r.lambda_max - ref) / ref < 1e-6);
}

TEST_CASE("condition report on the assembled level-0 system") {
  const MeshLevel mesh = build_mesh_level(0);
  const SaddlePointSystem sys = assemble_system(mesh);
  const MassMatrices mass = assemble_mass(mesh);

  const auto omega_res = compute_omega(sys, mass.Mq, 1e-8, 400);
  SmootherSpec spec;
  spec.omega = omega_res.omega;
  const Smoother s(sys, mass.Mq, spec);
  const auto report = validate_conditions(s, 1e-8, 400);
  CHECK(report.lambda_a_hat <= 1.0 + 1e-8); // symmetric GS never overshoots A
  CHECK(report.a_hat_ok);
  CHECK(report.schur_margin >= -1e-6);
  CHECK(report.schur_ok);

  SmootherSpec bad = spec;
  bad.omega = 2.0 / omega_res.lambda_max;
  const Smoother s_bad(sys, mass.Mq, bad);
  CHECK_FALSE(validate_conditions(s_bad, 1e-8, 400).schur_ok);
}
