#pragma once

#include <array>
#include <vector>

#include "uzawamg/types.hpp"

namespace uzawamg {

/// One level of the nested tetrahedral hierarchy on the unit cube: the Kuhn
/// 6-tets-per-cell triangulation of a uniform (4 * 2^level)^3 cell grid.
struct MeshLevel {
  int level = 0;
  int cells_per_dim = 0;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 4>> tetrahedra;
  std::vector<bool> boundary_vertex;
  std::vector<int> interior_index; // -1 on boundary vertices
  int n_interior = 0;
  double h_min = 0.0; // min over elements of h_T = vol(T)^(1/3)

  int vertex_id(int i, int j, int k) const {
    const int np = cells_per_dim + 1;
    return i + np * (j + np * k);
  }
  Index n_vertices() const { return static_cast<Index>(vertices.size()); }
};

struct MeshHierarchy {
  std::vector<MeshLevel> levels;
  int max_level() const { return static_cast<int>(levels.size()) - 1; }
};

MeshLevel build_mesh_level(int level);

/// Levels 0..max_level; level l is the uniform refinement of level l-1.
MeshHierarchy build_hierarchy(int max_level);

/// Signed volume of a tetrahedron given its four corner coordinates.
double tet_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                  const Eigen::Vector3d& d);

} // namespace uzawamg
