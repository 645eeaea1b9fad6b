#include "uzawamg/transfer.hpp"

#include <stdexcept>
#include <vector>

namespace uzawamg {

TransferOperator build_transfer(const MeshLevel& coarse, const MeshLevel& fine) {
  if (fine.cells_per_dim != 2 * coarse.cells_per_dim || fine.level != coarse.level + 1)
    throw std::invalid_argument("build_transfer: fine mesh is not the refinement of coarse");

  const int nf = fine.cells_per_dim;
  std::vector<Triplet> pres;
  std::vector<Triplet> vel;
  pres.reserve(fine.vertices.size() * 2);
  vel.reserve(fine.vertices.size() * 2);

  // Every fine vertex is either a coarse vertex or the midpoint of a coarse
  // edge; the edge endpoints are the componentwise floor and ceil of the
  // halved grid coordinates (a monotone pair, hence a Kuhn edge).
  for (int k = 0; k <= nf; ++k)
    for (int j = 0; j <= nf; ++j)
      for (int i = 0; i <= nf; ++i) {
        const int fid = fine.vertex_id(i, j, k);
        const int ai = i / 2, aj = j / 2, ak = k / 2;
        const int bi = ai + i % 2, bj = aj + j % 2, bk = ak + k % 2;
        const int ca = coarse.vertex_id(ai, aj, ak);
        const int cb = coarse.vertex_id(bi, bj, bk);
        if (ca == cb) {
          pres.emplace_back(fid, ca, 1.0);
          if (fine.interior_index[fid] >= 0 && coarse.interior_index[ca] >= 0)
            vel.emplace_back(fine.interior_index[fid], coarse.interior_index[ca], 1.0);
        } else {
          pres.emplace_back(fid, ca, 0.5);
          pres.emplace_back(fid, cb, 0.5);
          if (fine.interior_index[fid] >= 0) {
            if (coarse.interior_index[ca] >= 0)
              vel.emplace_back(fine.interior_index[fid], coarse.interior_index[ca], 0.5);
            if (coarse.interior_index[cb] >= 0)
              vel.emplace_back(fine.interior_index[fid], coarse.interior_index[cb], 0.5);
          }
        }
      }

  TransferOperator t;
  t.pressure.resize(fine.n_vertices(), coarse.n_vertices());
  t.pressure.setFromTriplets(pres.begin(), pres.end());
  t.pressure.makeCompressed();
  t.velocity.resize(fine.n_interior, coarse.n_interior);
  t.velocity.setFromTriplets(vel.begin(), vel.end());
  t.velocity.makeCompressed();
  return t;
}

Vector prolongate_velocity(const TransferOperator& t, const Vector& coarse) {
  const Index nc = t.velocity.cols();
  const Index nf = t.velocity.rows();
  if (coarse.size() != 3 * nc)
    throw std::invalid_argument("prolongate_velocity: dimension mismatch");
  Vector fine(3 * nf);
  for (int c = 0; c < 3; ++c)
    fine.segment(c * nf, nf).noalias() = t.velocity * coarse.segment(c * nc, nc);
  return fine;
}

Vector restrict_velocity(const TransferOperator& t, const Vector& fine) {
  const Index nc = t.velocity.cols();
  const Index nf = t.velocity.rows();
  if (fine.size() != 3 * nf)
    throw std::invalid_argument("restrict_velocity: dimension mismatch");
  Vector coarse(3 * nc);
  for (int c = 0; c < 3; ++c)
    coarse.segment(c * nc, nc).noalias() = t.velocity.transpose() * fine.segment(c * nf, nf);
  return coarse;
}

} // namespace uzawamg
