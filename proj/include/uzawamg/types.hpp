#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace uzawamg {

// All operators live in compressed sparse row form; values are 64-bit reals.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Triplet = Eigen::Triplet<double>;
using Index = Eigen::Index;

enum class Part { Lower, Upper };

} // namespace uzawamg
