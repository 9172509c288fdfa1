#include "hcone/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hcone {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

int DiskMesh::vertex(int ring, int sector) const {
  if (ring == 0) return 0;
  sector %= n_theta;
  if (sector < 0) sector += n_theta;
  return 1 + (ring - 1) * n_theta + sector;
}

double DiskMesh::total_area() const {
  double s = 0.0;
  for (double a : area) s += a;
  return s;
}

DiskMesh build_disk_mesh(int n_r, int n_theta) {
  if (n_r < 4 || n_theta < 8) throw OutOfRange("disk mesh needs n_r >= 4 and n_theta >= 8");
  DiskMesh m;
  m.n_r = n_r;
  m.n_theta = n_theta;
  m.uv.reserve(1 + n_r * n_theta);
  m.uv.emplace_back(0.0, 0.0);
  for (int i = 1; i <= n_r; ++i) {
    const double r = i == n_r ? 1.0 : static_cast<double>(i) / n_r;
    for (int j = 0; j < n_theta; ++j) {
      const double a = 2.0 * std::numbers::pi * j / n_theta;
      m.uv.emplace_back(r * std::cos(a), r * std::sin(a));
    }
  }

  for (int j = 0; j < n_theta; ++j) m.triangles.push_back({0, m.vertex(1, j), m.vertex(1, j + 1)});
  for (int i = 1; i < n_r; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int a = m.vertex(i, j), b = m.vertex(i + 1, j);
      const int c = m.vertex(i + 1, j + 1), d = m.vertex(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  }

  const double segment = 0.5 * (2.0 * std::numbers::pi / n_theta -
                                std::sin(2.0 * std::numbers::pi / n_theta));
  m.on_boundary.assign(m.uv.size(), 0);
  for (int j = 0; j < n_theta; ++j) {
    const int v = m.vertex(n_r, j);
    m.boundary.push_back(v);
    m.boundary_normal.push_back(m.uv[v]);
    m.on_boundary[v] = 1;
  }

  m.neighbors.assign(m.uv.size(), {});
  for (const auto& tri : m.triangles) {
    const Vec2 &p0 = m.uv[tri[0]], &p1 = m.uv[tri[1]], &p2 = m.uv[tri[2]];
    const double area2 = cross2(p1 - p0, p2 - p0);
    if (!(area2 > 0.0)) throw DegenerateInput("disk mesh produced a non-positive triangle");
    m.area.push_back(0.5 * area2);
    std::array<Vec2, 3> g;
    for (int k = 0; k < 3; ++k) {
      const Vec2& pj = m.uv[tri[(k + 1) % 3]];
      const Vec2& pk = m.uv[tri[(k + 2) % 3]];
      g[k] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / area2;
    }
    m.basis_grad.push_back(g);
    const int on_ring = m.on_boundary[tri[0]] + m.on_boundary[tri[1]] + m.on_boundary[tri[2]];
    m.quad_weight.push_back(0.5 * area2 + (on_ring == 2 ? segment : 0.0));
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        if (k != l) m.neighbors[tri[k]].push_back(tri[l]);
      }
    }
  }
  for (auto& nb : m.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return m;
}

}  // namespace hcone
