#pragma once

#include <array>
#include <vector>

#include "hcone/geometry.hpp"

namespace hcone {

/// Polar triangulation of the closed unit disk: a center vertex and n_r rings
/// of n_theta vertices each (ring i at radius i/n_r, angles 2 pi j / n_theta).
/// Every quad between rings is split along the same diagonal, which keeps the
/// discretization error smooth from cell to cell.
struct DiskMesh {
  int n_r = 0;
  int n_theta = 0;
  std::vector<Vec2> uv;
  std::vector<std::array<int, 3>> triangles;  // CCW in the (u,v) plane
  std::vector<double> area;                   // planar triangle areas
  /// Area weights for energy quadrature: the planar area plus, for triangles
  /// with an edge on the outer ring, the circular segment cut off by that
  /// edge. The weights sum to pi exactly.
  std::vector<double> quad_weight;
  /// Gradients of the three barycentric basis functions per triangle.
  std::vector<std::array<Vec2, 3>> basis_grad;
  std::vector<int> boundary;  // outer ring, CCW
  std::vector<Vec2> boundary_normal;
  std::vector<char> on_boundary;
  std::vector<std::vector<int>> neighbors;  // one-ring vertex adjacency

  int vertex(int ring, int sector) const;
  int num_vertices() const { return static_cast<int>(uv.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int ring_of(int v) const { return v == 0 ? 0 : 1 + (v - 1) / n_theta; }
  int sector_of(int v) const { return v == 0 ? 0 : (v - 1) % n_theta; }
  double radial_spacing() const { return 1.0 / n_r; }
  double total_area() const;
};

/// Throws OutOfRange unless n_r >= 4 and n_theta >= 8.
DiskMesh build_disk_mesh(int n_r, int n_theta);

/// Affine derivatives of a vertex field on one triangle.
template <class V>
std::pair<V, V> triangle_derivatives(const DiskMesh& mesh, int t, const std::vector<V>& f) {
  const auto& tri = mesh.triangles[t];
  const auto& g = mesh.basis_grad[t];
  V du = g[0].x() * f[tri[0]] + g[1].x() * f[tri[1]] + g[2].x() * f[tri[2]];
  V dv = g[0].y() * f[tri[0]] + g[1].y() * f[tri[1]] + g[2].y() * f[tri[2]];
  return {du, dv};
}

}  // namespace hcone
