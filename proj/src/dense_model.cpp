#include "uzawamg/dense_model.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace uzawamg::dense {

DenseMatrix saddle(const SaddleParts& sp) {
  const Index n = sp.n();
  const Index m = sp.m();
  DenseMatrix K(n + m, n + m);
  K.topLeftCorner(n, n) = sp.A;
  K.topRightCorner(n, m) = sp.B.transpose();
  K.bottomLeftCorner(m, n) = sp.B;
  K.bottomRightCorner(m, m) = -sp.C;
  return K;
}

DenseMatrix symmetrized(const DenseMatrix& a_hat, const DenseMatrix& A) {
  const DenseMatrix mid = a_hat + a_hat.transpose() - A;
  return a_hat * mid.partialPivLu().solve(a_hat.transpose());
}

DenseMatrix preconditioner(SmootherClass cls, const SaddleParts& sp, const DenseMatrix& a_hat,
                           const DenseMatrix& s_hat, double alpha) {
  const Index n = sp.n();
  const Index m = sp.m();
  DenseMatrix P = DenseMatrix::Zero(n + m, n + m);
  switch (cls) {
    case SmootherClass::Diagonal:
      P.topLeftCorner(n, n) = a_hat;
      P.bottomRightCorner(m, m) = -s_hat;
      return P;
    case SmootherClass::Lower:
      P.topLeftCorner(n, n) = a_hat;
      P.bottomLeftCorner(m, n) = sp.B;
      P.bottomRightCorner(m, m) = -s_hat;
      return P;
    case SmootherClass::Upper:
      P.topLeftCorner(n, n) = a_hat.transpose();
      P.topRightCorner(n, m) = sp.B.transpose();
      P.bottomRightCorner(m, m) = -s_hat.transpose();
      return P;
    case SmootherClass::Factorization: {
      const DenseMatrix a_inv_bt = a_hat.partialPivLu().solve(sp.B.transpose());
      P.topLeftCorner(n, n) = a_hat;
      P.topRightCorner(n, m) = sp.B.transpose();
      P.bottomLeftCorner(m, n) = sp.B;
      P.bottomRightCorner(m, m) = sp.B * a_inv_bt - s_hat;
      return P;
    }
    case SmootherClass::Symmetric: {
      DenseMatrix lower = DenseMatrix::Identity(n + m, n + m);
      lower.bottomLeftCorner(m, n) = sp.B * a_hat.partialPivLu().solve(DenseMatrix::Identity(n, n));
      DenseMatrix upper = DenseMatrix::Identity(n + m, n + m);
      upper.topRightCorner(n, m) =
          a_hat.transpose().partialPivLu().solve(sp.B.transpose());
      DenseMatrix mid = DenseMatrix::Zero(n + m, n + m);
      mid.topLeftCorner(n, n) = symmetrized(a_hat, sp.A);
      mid.bottomRightCorner(m, m) = -s_hat;
      return lower * mid * upper;
    }
    case SmootherClass::BraessSarazin: {
      const DenseMatrix d_alpha = alpha * sp.A.diagonal().asDiagonal();
      P.topLeftCorner(n, n) = d_alpha;
      P.topRightCorner(n, m) = sp.B.transpose();
      P.bottomLeftCorner(m, n) = sp.B;
      P.bottomRightCorner(m, m) = -sp.C;
      return P;
    }
  }
  throw std::logic_error("dense::preconditioner: unknown class");
}

DenseMatrix iteration_matrix(const DenseMatrix& P, const DenseMatrix& K) {
  return DenseMatrix::Identity(P.rows(), P.cols()) - P.partialPivLu().solve(K);
}

DenseMatrix m1(const DenseMatrix& P, const SaddleParts& sp) {
  const Index n = sp.n();
  const Index m = sp.m();
  DenseMatrix M = DenseMatrix::Identity(n + m, n + m);
  const auto lu = P.partialPivLu();
  M.topLeftCorner(n, n) -= lu.solve(sp.A);
  M.topRightCorner(n, m) = -lu.solve(sp.B.transpose());
  return M;
}

DenseMatrix m2(const DenseMatrix& R, const SaddleParts& sp) {
  const Index n = sp.n();
  const Index m = sp.m();
  DenseMatrix M = DenseMatrix::Identity(n + m, n + m);
  const auto lu = R.partialPivLu();
  M.bottomLeftCorner(m, n) = lu.solve(sp.B);
  M.bottomRightCorner(m, m) -= lu.solve(sp.C);
  return M;
}

DenseMatrix sqrt_spd(const DenseMatrix& M) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(M);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("sqrt_spd: matrix not positive definite");
  return es.operatorSqrt();
}

double lambda_max_generalized(const DenseMatrix& M, const DenseMatrix& N) {
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(M, N);
  return es.eigenvalues().maxCoeff();
}

DenseMatrix random_dense(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseMatrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = dist(rng);
  return M;
}

DenseMatrix random_spd(Index n, std::mt19937_64& rng, double cond) {
  const DenseMatrix G = random_dense(n, n, rng);
  const DenseMatrix Q = Eigen::HouseholderQR<DenseMatrix>(G).householderQ();
  Vector d(n);
  for (Index i = 0; i < n; ++i)
    d[i] = std::pow(cond, n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
  return Q * d.asDiagonal() * Q.transpose();
}

SaddleParts random_saddle(Index n, Index m, std::mt19937_64& rng, double cond) {
  SaddleParts sp;
  sp.A = random_spd(n, rng, cond);
  sp.C = random_spd(m, rng, cond);
  sp.B = random_dense(m, n, rng);
  return sp;
}

SparseMatrix to_sparse(const DenseMatrix& M) {
  SparseMatrix S = M.sparseView(1.0, 0.0); // keep everything nonzero
  S.makeCompressed();
  return S;
}

SaddlePointSystem to_system(const SaddleParts& sp) {
  SaddlePointSystem sys;
  sys.A = to_sparse(sp.A);
  sys.B = to_sparse(sp.B);
  sys.B_T = to_sparse(DenseMatrix(sp.B.transpose()));
  sys.C = to_sparse(sp.C);
  sys.n_velocity_dofs = sp.n();
  sys.n_pressure_dofs = sp.m();
  sys.n_scalar_interior = sp.n();
  sys.f = Vector::Zero(sp.n());
  sys.g = Vector::Zero(sp.m());
  return sys;
}

} // namespace uzawamg::dense
