#include "hcone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hcone {

UnitVec UnitVec::checked(const Vec3& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-12) {
    throw DegenerateInput("vector is not of unit length");
  }
  return UnitVec(v);
}

UnitVec UnitVec::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < kDegenerateNorm) {
    throw DegenerateInput("cannot normalize a vector of norm " + std::to_string(n));
  }
  return UnitVec(v / n);
}

ConeSpec ConeSpec::make(const UnitVec& axis, double half_angle) {
  if (!(half_angle > 0.0 && half_angle < std::numbers::pi / 2)) {
    throw OutOfRange("cone half-angle must lie in (0, pi/2)");
  }
  return ConeSpec{axis, half_angle};
}

ConeSpec ConeSpec::vertical(double half_angle) {
  return make(UnitVec::checked(Vec3::UnitZ()), half_angle);
}

UnitVec radial_project(const Vec3& x) { return UnitVec::normalized(x); }

double cone_margin(const ConeSpec& cone, const Vec3& x) {
  return x.dot(cone.axis.vec()) - x.norm() * std::cos(cone.half_angle);
}

Vec2 stereographic_south(const UnitVec& p) {
  const double denom = 1.0 + p.z();
  if (denom <= 1e-10) {
    throw PoleSingularity("stereographic projection undefined at the south pole");
  }
  return {p.x() / denom, p.y() / denom};
}

Vec3 stereographic_south_inverse(const Vec2& q) {
  const double r2 = q.squaredNorm();
  return Vec3(2.0 * q.x(), 2.0 * q.y(), 1.0 - r2) / (1.0 + r2);
}

double c_beta(double beta) {
  if (!(beta > 0.0 && beta < std::numbers::pi / 2)) {
    throw OutOfRange("c_beta requires beta in (0, pi/2)");
  }
  const double c = std::cos(beta);
  return c / (2.0 * (1.0 + c));
}

namespace {

double point_segment_distance(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (q - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - q).norm();
}

}  // namespace

int winding_degree(std::span<const Vec2> loop, const Vec2& q) {
  const std::size_t n = loop.size();
  if (n < 3) throw DegenerateInput("winding loop needs at least three points");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    if (point_segment_distance(q, a, b) < 1e-9) {
      throw PointOnCurve("probe point lies on the loop");
    }
    const Vec2 da = a - q;
    const Vec2 db = b - q;
    // signed angle from da to db, in (-pi, pi]
    total += std::atan2(da.x() * db.y() - da.y() * db.x(), da.dot(db));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

Mat3 rotation_to_north(const UnitVec& from) {
  const Vec3 north = Vec3::UnitZ();
  if (from.z() < -1.0 + 1e-12) {
    return Eigen::AngleAxisd(std::numbers::pi, Vec3::UnitX()).toRotationMatrix();
  }
  return Eigen::Quaterniond::FromTwoVectors(from.vec(), north).toRotationMatrix();
}

}  // namespace hcone
