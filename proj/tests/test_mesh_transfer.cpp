#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uzawamg/kernels.hpp"
#include "uzawamg/mesh.hpp"
#include "uzawamg/transfer.hpp"

using namespace uzawamg;

TEST_CASE("level counts match the refined 6-element cube") {
  const MeshLevel l0 = build_mesh_level(0);
  CHECK(l0.tetrahedra.size() == 384);
  CHECK(l0.vertices.size() == 125);
  CHECK(l0.n_interior == 27);

  const MeshLevel l1 = build_mesh_level(1);
  CHECK(l1.tetrahedra.size() == 3072);
  CHECK(l1.vertices.size() == 729);
}

TEST_CASE("tetrahedra are positively oriented and fill the cube") {
  const MeshLevel mesh = build_mesh_level(0);
  double total = 0.0;
  for (const auto& tet : mesh.tetrahedra) {
    const double vol = tet_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                                  mesh.vertices[tet[2]], mesh.vertices[tet[3]]);
    CHECK(vol > 0.0);
    total += vol;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("h_min halves exactly per level") {
  const MeshHierarchy h = build_hierarchy(2);
  CHECK(h.levels[1].h_min == doctest::Approx(h.levels[0].h_min / 2.0).epsilon(1e-15));
  CHECK(h.levels[2].h_min == doctest::Approx(h.levels[1].h_min / 2.0).epsilon(1e-15));
}

TEST_CASE("index overflow guard") {
  CHECK_THROWS_AS(build_mesh_level(9), std::invalid_argument);
}

TEST_CASE("transfer rejects mismatched levels") {
  const MeshLevel l0 = build_mesh_level(0);
  CHECK_THROWS_AS(build_transfer(l0, l0), std::invalid_argument);
}

TEST_CASE("prolongation reproduces linear and constant fields") {
  const MeshLevel coarse = build_mesh_level(0);
  const MeshLevel fine = build_mesh_level(1);
  const TransferOperator t = build_transfer(coarse, fine);

  Vector qc(coarse.n_vertices());
  for (Index v = 0; v < coarse.n_vertices(); ++v) qc[v] = coarse.vertices[v].x();
  const Vector qf = t.pressure * qc;
  for (Index v = 0; v < fine.n_vertices(); ++v)
    CHECK(qf[v] == doctest::Approx(fine.vertices[v].x()).epsilon(1e-14));

  const Vector ones = t.pressure * Vector::Ones(coarse.n_vertices());
  CHECK((ones.array() - 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("prolongation rows are interpolation weights") {
  const MeshLevel coarse = build_mesh_level(0);
  const MeshLevel fine = build_mesh_level(1);
  const TransferOperator t = build_transfer(coarse, fine);
  for (Index i = 0; i < t.pressure.rows(); ++i) {
    int nnz = 0;
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(t.pressure, i); it; ++it) {
      ++nnz;
      sum += it.value();
      CHECK((it.value() == doctest::Approx(1.0) || it.value() == doctest::Approx(0.5)));
    }
    CHECK(nnz <= 2);
    CHECK(sum == doctest::Approx(1.0));
  }
  // velocity rows: at most two entries, may lose weight to eliminated
  // boundary endpoints
  for (Index i = 0; i < t.velocity.rows(); ++i) {
    int nnz = 0;
    for (SparseMatrix::InnerIterator it(t.velocity, i); it; ++it) ++nnz;
    CHECK(nnz <= 2);
  }
}
