#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <span>

#include "hcone/errors.hpp"

namespace hcone {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Threshold below which a vector is treated as zero when normalizing.
inline constexpr double kDegenerateNorm = 1e-14;

/// A point of the unit sphere. Construction checks | |v| - 1 | <= 1e-12.
class UnitVec {
 public:
  UnitVec() : v_(0.0, 0.0, 1.0) {}

  /// Wraps an already normalized vector; throws DegenerateInput otherwise.
  static UnitVec checked(const Vec3& v);
  /// Normalizes v; throws DegenerateInput when |v| < 1e-14.
  static UnitVec normalized(const Vec3& v);

  const Vec3& vec() const noexcept { return v_; }
  operator const Vec3&() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }
  double dot(const Vec3& w) const { return v_.dot(w); }
  UnitVec operator-() const { return UnitVec(-v_); }

 private:
  explicit UnitVec(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Open cone {x : x . axis - |x| cos(half_angle) > 0}.
struct ConeSpec {
  UnitVec axis;
  double half_angle = 0.0;

  /// Validates 0 < half_angle < pi/2.
  static ConeSpec make(const UnitVec& axis, double half_angle);
  /// Cone around e3.
  static ConeSpec vertical(double half_angle);
};

/// P(x) = x/|x|.
UnitVec radial_project(const Vec3& x);

/// x . axis - |x| cos(beta). Positive inside, zero on the boundary rays and at 0.
double cone_margin(const ConeSpec& cone, const Vec3& x);

/// Stereographic projection from the south pole (0,0,-1) onto the plane z = 0.
Vec2 stereographic_south(const UnitVec& p);
Vec3 stereographic_south_inverse(const Vec2& q);

/// c_beta = cos(beta) / (2 (1 + cos(beta))), the growth bound for H(p)|p|.
double c_beta(double beta);

/// Winding number of a closed polygonal loop around q, by accumulating atan2
/// angle increments. The loop is implicitly closed (last point joins the first).
int winding_degree(std::span<const Vec2> loop, const Vec2& q);

/// Det[a, b, c] = (a x b) . c.
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.cross(b).dot(c); }

/// Rotation R with R * from = e3 (minimal rotation; pi about e1 when from = -e3).
Mat3 rotation_to_north(const UnitVec& from);

}  // namespace hcone
