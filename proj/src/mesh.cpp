#include "uzawamg/mesh.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uzawamg {

double tet_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                  const Eigen::Vector3d& d) {
  Eigen::Matrix3d e;
  e.col(0) = b - a;
  e.col(1) = c - a;
  e.col(2) = d - a;
  return e.determinant() / 6.0;
}

MeshLevel build_mesh_level(int level) {
  if (level < 0) throw std::invalid_argument("build_mesh_level: negative level");
  const long n_long = 4L << level;
  if (n_long + 1 > 1290) // (n+1)^3 must stay below the 32-bit index range
    throw std::invalid_argument("build_mesh_level: level " + std::to_string(level) +
                                " overflows the vertex index type");
  const int n = static_cast<int>(n_long);
  const int np = n + 1;

  MeshLevel mesh;
  mesh.level = level;
  mesh.cells_per_dim = n;
  mesh.vertices.reserve(static_cast<std::size_t>(np) * np * np);
  const double h = 1.0 / n;
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) mesh.vertices.emplace_back(i * h, j * h, k * h);

  mesh.boundary_vertex.assign(mesh.vertices.size(), false);
  mesh.interior_index.assign(mesh.vertices.size(), -1);
  int next_interior = 0;
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) {
        const int v = mesh.vertex_id(i, j, k);
        const bool bnd = i == 0 || i == n || j == 0 || j == n || k == 0 || k == n;
        mesh.boundary_vertex[v] = bnd;
        if (!bnd) mesh.interior_index[v] = next_interior++;
      }
  mesh.n_interior = next_interior;

  // Kuhn triangulation: each cell is split into the 6 tetrahedra spanned by
  // the monotone lattice paths from the cell origin to the opposite corner.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tetrahedra.reserve(static_cast<std::size_t>(6) * n * n * n);
  double min_vol = 1.0;
  for (int ck = 0; ck < n; ++ck)
    for (int cj = 0; cj < n; ++cj)
      for (int ci = 0; ci < n; ++ci)
        for (const auto& perm : perms) {
          std::array<int, 3> p = {ci, cj, ck};
          std::array<int, 4> tet;
          tet[0] = mesh.vertex_id(p[0], p[1], p[2]);
          for (int s = 0; s < 3; ++s) {
            ++p[perm[s]];
            tet[s + 1] = mesh.vertex_id(p[0], p[1], p[2]);
          }
          double vol = tet_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                                  mesh.vertices[tet[2]], mesh.vertices[tet[3]]);
          if (vol < 0.0) {
            std::swap(tet[2], tet[3]);
            vol = -vol;
          }
          min_vol = std::min(min_vol, vol);
          mesh.tetrahedra.push_back(tet);
        }
  mesh.h_min = std::cbrt(min_vol);
  return mesh;
}

MeshHierarchy build_hierarchy(int max_level) {
  if (max_level < 0) throw std::invalid_argument("build_hierarchy: max_level must be >= 0");
  MeshHierarchy hierarchy;
  hierarchy.levels.reserve(max_level + 1);
  for (int l = 0; l <= max_level; ++l) hierarchy.levels.push_back(build_mesh_level(l));
  return hierarchy;
}

} // namespace uzawamg
