#pragma once
// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hcone/boundary.hpp"

namespace oracle {

using hcone::Vec3;

/// Dense samples of the closed spherical domain {colatitude <= alpha(phi)},
/// built from the colatitude series directly.
inline std::vector<Vec3> domain_points(const hcone::SphericalBoundary& b, int rings, int per_ring) {
  std::vector<Vec3> out{Vec3::UnitZ()};
  for (int i = 1; i <= rings; ++i) {
    for (int j = 0; j < per_ring; ++j) {
      const double phi = 2 * std::numbers::pi * j / per_ring;
      const double a = b.colatitude().value(phi) * i / rings;
      out.emplace_back(std::sin(a) * std::cos(phi), std::sin(a) * std::sin(phi), std::cos(a));
    }
  }
  return out;
}

/// Brute-force beta-cone condition: at each of n_boundary boundary points,
/// sweep every axis at angle beta from the point (n_axis directions) and ask
/// whether one of those cones holds all domain samples up to `slack` in angle.
inline bool beta_cone_condition(const hcone::SphericalBoundary& b, double beta, int n_boundary,
                                int n_axis, const std::vector<Vec3>& domain, double slack) {
  const double cos_limit = std::cos(beta + slack);
  for (int i = 0; i < n_boundary; ++i) {
    const double phi = 2 * std::numbers::pi * i / n_boundary;
    const double a = b.colatitude().value(phi);
    const Vec3 p(std::sin(a) * std::cos(phi), std::sin(a) * std::sin(phi), std::cos(a));
    const Vec3 e1 = p.unitOrthogonal();
    const Vec3 e2 = p.cross(e1);
    bool found = false;
    for (int k = 0; k < n_axis && !found; ++k) {
      const double psi = 2 * std::numbers::pi * k / n_axis;
      const Vec3 axis = std::cos(beta) * p + std::sin(beta) * (std::cos(psi) * e1 + std::sin(psi) * e2);
      found = std::all_of(domain.begin(), domain.end(),
                          [&](const Vec3& q) { return q.dot(axis) >= cos_limit; });
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace oracle
