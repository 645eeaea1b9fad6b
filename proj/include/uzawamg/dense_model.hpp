#pragma once

#include <cstdint>
#include <random>

#include "uzawamg/smoother.hpp"
#include "uzawamg/types.hpp"

namespace uzawamg::dense {

/// Blocks of a dense saddle point system [ A  B^T ; B  -C ].
struct SaddleParts {
  DenseMatrix A;
  DenseMatrix B;
  DenseMatrix C;
  Index n() const { return A.rows(); }
  Index m() const { return C.rows(); }
};

DenseMatrix saddle(const SaddleParts& sp);

/// A_s = A-hat (A-hat + A-hat^T - A)^-1 A-hat^T.
DenseMatrix symmetrized(const DenseMatrix& a_hat, const DenseMatrix& A);

/// Dense preconditioner of one class from explicit blocks A-hat, S-hat.
DenseMatrix preconditioner(SmootherClass cls, const SaddleParts& sp, const DenseMatrix& a_hat,
                           const DenseMatrix& s_hat, double alpha = 1.0);

/// I - P^-1 K.
DenseMatrix iteration_matrix(const DenseMatrix& P, const DenseMatrix& K);

/// Factors of the block triangular / symmetric iteration matrices:
/// M1(P) = [ I - P^-1 A, -P^-1 B^T ; 0, I ],  M2(R) = [ I, 0 ; R^-1 B, I - R^-1 C ].
DenseMatrix m1(const DenseMatrix& P, const SaddleParts& sp);
DenseMatrix m2(const DenseMatrix& R, const SaddleParts& sp);

DenseMatrix sqrt_spd(const DenseMatrix& M);

/// lambda_max of the generalized problem M x = lambda N x, N SPD.
double lambda_max_generalized(const DenseMatrix& M, const DenseMatrix& N);

DenseMatrix random_spd(Index n, std::mt19937_64& rng, double cond = 100.0);
DenseMatrix random_dense(Index rows, Index cols, std::mt19937_64& rng);

/// Random dense saddle parts with SPD A and C; the toy systems behind the
/// oracle tests.
SaddleParts random_saddle(Index n, Index m, std::mt19937_64& rng, double cond = 50.0);

SparseMatrix to_sparse(const DenseMatrix& M);

/// Converts dense saddle parts into the assembled-system container so the
/// sparse smoother path can run on toy systems.
SaddlePointSystem to_system(const SaddleParts& sp);

} // namespace uzawamg::dense
