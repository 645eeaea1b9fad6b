#include "uzawamg/assembly.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "uzawamg/kernels.hpp"

namespace uzawamg {

namespace {

struct ElementGeometry {
  double volume;
  Eigen::Matrix<double, 3, 4> grads; // constant P1 basis gradients
  Eigen::Vector3d centroid;
};

ElementGeometry element_geometry(const MeshLevel& mesh, const std::array<int, 4>& tet) {
  const Eigen::Vector3d& x0 = mesh.vertices[tet[0]];
  Eigen::Matrix3d e;
  e.col(0) = mesh.vertices[tet[1]] - x0;
  e.col(1) = mesh.vertices[tet[2]] - x0;
  e.col(2) = mesh.vertices[tet[3]] - x0;
  ElementGeometry geo;
  geo.volume = e.determinant() / 6.0;
  if (geo.volume < 1e-14)
    throw std::runtime_error("assemble: degenerate tetrahedron, volume " +
                             std::to_string(geo.volume));
  const Eigen::Matrix3d inv = e.inverse();
  for (int i = 0; i < 3; ++i) geo.grads.col(i + 1) = inv.row(i).transpose();
  geo.grads.col(0) = -(geo.grads.col(1) + geo.grads.col(2) + geo.grads.col(3));
  geo.centroid = 0.25 * (x0 + mesh.vertices[tet[1]] + mesh.vertices[tet[2]] +
                         mesh.vertices[tet[3]]);
  return geo;
}

SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet>& trip) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune([](const Index&, const Index&, const double& v) { return v != 0.0; });
  m.makeCompressed();
  return m;
}

} // namespace

SaddlePointSystem assemble_system(const MeshLevel& mesh, const ForcingFunction& forcing) {
  const Index ni = mesh.n_interior;
  const Index n = 3 * ni;
  const Index m = mesh.n_vertices();

  std::vector<Triplet> ta, tb, tc;
  ta.reserve(mesh.tetrahedra.size() * 48);
  tb.reserve(mesh.tetrahedra.size() * 48);
  tc.reserve(mesh.tetrahedra.size() * 16);
  SaddlePointSystem sys;
  sys.f = Vector::Zero(n);
  sys.g = Vector::Zero(m);

  for (const auto& tet : mesh.tetrahedra) {
    const ElementGeometry geo = element_geometry(mesh, tet);
    const double h_t2 = std::cbrt(geo.volume) * std::cbrt(geo.volume);
    const double stab = kStabilizationDelta * h_t2;
    const Eigen::Vector3d fc = forcing ? forcing(geo.centroid) : Eigen::Vector3d::Zero();

    for (int i = 0; i < 4; ++i) {
      const int vi = tet[i];
      const int ii = mesh.interior_index[vi];
      for (int j = 0; j < 4; ++j) {
        const int vj = tet[j];
        const int ij = mesh.interior_index[vj];
        const double k_ij = geo.volume * geo.grads.col(i).dot(geo.grads.col(j));
        if (ii >= 0 && ij >= 0)
          for (int c = 0; c < 3; ++c) ta.emplace_back(c * ni + ii, c * ni + ij, k_ij);
        tc.emplace_back(vi, vj, stab * k_ij);
        if (ij >= 0)
          for (int c = 0; c < 3; ++c)
            tb.emplace_back(vi, c * ni + ij, -0.25 * geo.volume * geo.grads(c, j));
      }
      if (ii >= 0 && forcing)
        for (int c = 0; c < 3; ++c) sys.f[c * ni + ii] += 0.25 * geo.volume * fc[c];
      if (forcing) sys.g[vi] -= stab * geo.volume * fc.dot(geo.grads.col(i));
    }
  }

  sys.A = from_triplets(n, n, ta);
  sys.B = from_triplets(m, n, tb);
  sys.C = from_triplets(m, m, tc);
  sys.B_T = SparseMatrix(sys.B.transpose());
  sys.B_T.makeCompressed();
  sys.n_velocity_dofs = n;
  sys.n_pressure_dofs = m;
  sys.n_scalar_interior = ni;
  return sys;
}

MassMatrices assemble_mass(const MeshLevel& mesh) {
  const Index ni = mesh.n_interior;
  const Index m = mesh.n_vertices();
  std::vector<Triplet> tv, tq;
  tv.reserve(mesh.tetrahedra.size() * 16);
  tq.reserve(mesh.tetrahedra.size() * 16);
  for (const auto& tet : mesh.tetrahedra) {
    const ElementGeometry geo = element_geometry(mesh, tet);
    const double w = geo.volume / 20.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double m_ij = (i == j ? 2.0 : 1.0) * w;
        tq.emplace_back(tet[i], tet[j], m_ij);
        const int ii = mesh.interior_index[tet[i]];
        const int ij = mesh.interior_index[tet[j]];
        if (ii >= 0 && ij >= 0) tv.emplace_back(ii, ij, m_ij);
      }
  }
  MassMatrices mass;
  mass.Mv = from_triplets(ni, ni, tv);
  mass.Mq = from_triplets(m, m, tq);
  return mass;
}

Vector saddle_apply(const SaddlePointSystem& sys, const Vector& x) {
  const Index n = sys.n_velocity_dofs;
  const Index m = sys.n_pressure_dofs;
  if (x.size() != n + m) throw std::invalid_argument("saddle_apply: dimension mismatch");
  Vector y(n + m);
  y.head(n).noalias() = sys.A * x.head(n);
  y.head(n).noalias() += sys.B_T * x.tail(m);
  y.tail(m).noalias() = sys.B * x.head(n);
  y.tail(m).noalias() -= sys.C * x.tail(m);
  return y;
}

Vector saddle_residual(const SaddlePointSystem& sys, const Vector& x, const Vector& f,
                       const Vector& g) {
  Vector r = saddle_apply(sys, x);
  r.head(sys.n_velocity_dofs) = f - r.head(sys.n_velocity_dofs);
  r.tail(sys.n_pressure_dofs) = g - r.tail(sys.n_pressure_dofs);
  return r;
}

NormOperator::NormOperator(const MeshLevel& mesh, MassMatrices mass, bool lumped)
    : mass_(std::move(mass)), h_scale_(1.0 / (mesh.h_min * mesh.h_min)), lumped_(lumped) {
  mv_lumped_ = mass_.Mv * Vector::Ones(mass_.Mv.rows());
  mq_lumped_ = mass_.Mq * Vector::Ones(mass_.Mq.rows());
  mq_total_ = mq_lumped_.sum();
}

Vector NormOperator::apply(const Vector& x) const {
  const Index ni = mass_.Mv.rows();
  const Index m = mass_.Mq.rows();
  if (x.size() != 3 * ni + m) throw std::invalid_argument("NormOperator::apply: dimension mismatch");
  Vector y(x.size());
  for (int c = 0; c < 3; ++c) {
    if (lumped_)
      y.segment(c * ni, ni) = h_scale_ * mv_lumped_.cwiseProduct(x.segment(c * ni, ni));
    else
      y.segment(c * ni, ni).noalias() = h_scale_ * (mass_.Mv * x.segment(c * ni, ni));
  }
  if (lumped_)
    y.tail(m) = mq_lumped_.cwiseProduct(x.tail(m));
  else
    y.tail(m).noalias() = mass_.Mq * x.tail(m);
  return y;
}

double NormOperator::value(const Vector& x) const { return std::sqrt(x.dot(apply(x))); }

Vector NormOperator::inverse_apply(const Vector& r) const {
  const Index ni = mass_.Mv.rows();
  const Index m = mass_.Mq.rows();
  if (r.size() != 3 * ni + m)
    throw std::invalid_argument("NormOperator::inverse_apply: dimension mismatch");
  Vector z(r.size());
  if (lumped_) {
    for (int c = 0; c < 3; ++c)
      z.segment(c * ni, ni) = r.segment(c * ni, ni).cwiseQuotient(mv_lumped_) / h_scale_;
    z.tail(m) = r.tail(m).cwiseQuotient(mq_lumped_);
    return z;
  }
  for (int c = 0; c < 3; ++c) {
    const auto res = cg_solve(mass_.Mv, r.segment(c * ni, ni), 1e-10, 2000);
    if (!res.converged)
      throw std::runtime_error("NormOperator: velocity mass CG did not converge");
    z.segment(c * ni, ni) = res.x / h_scale_;
  }
  const auto res = cg_solve(mass_.Mq, r.tail(m), 1e-10, 2000);
  if (!res.converged)
    throw std::runtime_error("NormOperator: pressure mass CG did not converge");
  z.tail(m) = res.x;
  return z;
}

double NormOperator::dual_value(const Vector& r) const { return std::sqrt(r.dot(inverse_apply(r))); }

double NormOperator::pressure_mean(const Vector& p) const {
  if (p.size() != mass_.Mq.rows())
    throw std::invalid_argument("NormOperator::pressure_mean: dimension mismatch");
  return mq_lumped_.dot(p) / mq_total_;
}

} // namespace uzawamg
