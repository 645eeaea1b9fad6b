#include "uzawamg/kernels.hpp"

#include <Eigen/Dense>

namespace uzawamg {

Vector spmv(const SparseMatrix& M, const Vector& x) {
  if (x.size() != M.cols())
    throw std::invalid_argument("spmv: dimension mismatch, matrix has " + std::to_string(M.cols()) +
                                " columns, vector has " + std::to_string(x.size()) + " entries");
  return M * x;
}

Vector triangular_sweep(const SparseMatrix& M, const Vector& b, Part part) {
  if (M.rows() != M.cols()) throw std::invalid_argument("triangular_sweep: matrix not square");
  if (b.size() != M.rows()) throw std::invalid_argument("triangular_sweep: dimension mismatch");
  const Index n = M.rows();
  Vector x(n);
  if (part == Part::Lower) {
    for (Index i = 0; i < n; ++i) {
      double sum = b[i];
      double diag = 0.0;
      for (SparseMatrix::InnerIterator it(M, i); it; ++it) {
        if (it.col() < i)
          sum -= it.value() * x[it.col()];
        else if (it.col() == i)
          diag = it.value();
        else
          break; // columns are sorted
      }
      if (diag == 0.0)
        throw std::runtime_error("triangular_sweep: zero diagonal in row " + std::to_string(i));
      x[i] = sum / diag;
    }
  } else {
    for (Index i = n - 1; i >= 0; --i) {
      double sum = b[i];
      double diag = 0.0;
      for (SparseMatrix::InnerIterator it(M, i); it; ++it) {
        if (it.col() > i)
          sum -= it.value() * x[it.col()];
        else if (it.col() == i)
          diag = it.value();
      }
      if (diag == 0.0)
        throw std::runtime_error("triangular_sweep: zero diagonal in row " + std::to_string(i));
      x[i] = sum / diag;
    }
  }
  return x;
}

CgResult cg_solve(const SparseMatrix& M, const Vector& b, double tol, int max_iter) {
  if (M.rows() != M.cols() || b.size() != M.rows())
    throw std::invalid_argument("cg_solve: dimension mismatch");
  return cg_solve_op([&M](const Vector& p, Vector& out) { out.noalias() = M * p; }, b, tol,
                     max_iter);
}

Vector random_vector(Index dim, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

Vector lu_solve(const DenseMatrix& M, const Vector& b) {
  if (M.rows() != M.cols() || b.size() != M.rows())
    throw std::invalid_argument("lu_solve: dimension mismatch");
  Eigen::PartialPivLU<DenseMatrix> lu(M);
  const double scale = M.cwiseAbs().maxCoeff();
  const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (scale == 0.0 || pivot_min < 1e-14 * scale)
    throw std::runtime_error("lu_solve: singular pivot " + std::to_string(pivot_min));
  return lu.solve(b);
}

double dense_spectral_norm(const DenseMatrix& K, double tol, int max_iter, std::uint64_t seed) {
  if (K.size() == 0) return 0.0;
  const auto res = power_method(
      [&K](const Vector& x, Vector& y) { y.noalias() = K.transpose() * (K * x); }, K.cols(), tol,
      max_iter, seed);
  return std::sqrt(std::max(res.lambda, 0.0));
}

} // namespace uzawamg
