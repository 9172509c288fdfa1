#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hcone/geometry.hpp"

namespace hcone {

/// Truncated Fourier series f(phi) = a0 + sum_k (a_k cos k phi + b_k sin k phi).
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> a;  // a[k-1] multiplies cos(k phi)
  std::vector<double> b;  // b[k-1] multiplies sin(k phi)

  static FourierSeries constant(double value) { return {value, {}, {}}; }

  double value(double phi) const;
  double derivative(double phi) const;
  int order() const { return static_cast<int>(std::max(a.size(), b.size())); }
};

/// Closed curve on S^2 given in spherical coordinates about e3 as
/// colatitude alpha(phi) over azimuth phi. The curve parameter theta maps to
/// phi = direction * theta + phase, so reversed() and shifted() describe the
/// same point set with another parametrization.
class SphericalBoundary {
 public:
  static constexpr int kMaxOrder = 8;

  static SphericalBoundary cap(double alpha_c);
  /// alpha(phi) = alpha_c + sum_{k<=8} a_k cos k phi + b_k sin k phi.
  static SphericalBoundary perturbed_cap(double alpha_c, std::vector<double> a,
                                         std::vector<double> b);

  SphericalBoundary reversed() const;
  SphericalBoundary shifted(double dtheta) const;

  UnitVec point(double theta) const;
  /// d/dtheta of point(theta).
  Vec3 tangent(double theta) const;

  double azimuth(double theta) const { return direction_ * theta + phase_; }
  double colatitude_at_azimuth(double phi) const { return colatitude_.value(phi); }
  double alpha_c() const { return colatitude_.a0; }
  int direction() const { return direction_; }
  const FourierSeries& colatitude() const { return colatitude_; }

  /// Samples of the closed domain {colatitude <= alpha(phi)}: the pole plus
  /// concentric rings, the last ring lying on the boundary. Roughly n points.
  std::vector<UnitVec> domain_samples(int n) const;

 private:
  FourierSeries colatitude_;
  int direction_ = 1;
  double phase_ = 0.0;
};

/// Gamma(theta) = g(phi(theta)) * gamma_hat(theta).
class RadialGraphCurve {
 public:
  RadialGraphCurve(SphericalBoundary boundary, FourierSeries g)
      : boundary_(std::move(boundary)), g_(std::move(g)) {}

  const SphericalBoundary& boundary() const { return boundary_; }
  const FourierSeries& radial_factor() const { return g_; }

  double g(double theta) const { return g_.value(boundary_.azimuth(theta)); }
  Vec3 point(double theta) const;
  Vec3 tangent(double theta) const;
  double min_g(int samples = 4096) const;

  /// n parameters with equal arclength spacing, starting at theta = 0.
  std::vector<double> arclength_parameters(int n) const;

 private:
  SphericalBoundary boundary_;
  FourierSeries g_;
};

/// The two unit vectors at angle beta from gamma_hat(theta) orthogonal to its tangent.
std::pair<UnitVec, UnitVec> axis_candidates(const SphericalBoundary& boundary, double beta,
                                            double theta);

/// The unique axis of a beta-cone touching the domain at gamma_hat(theta) and
/// containing every containment sample (within tol). Throws NotBetaConvexAt.
UnitVec axis_at(const SphericalBoundary& boundary, double beta, double theta,
                std::span<const UnitVec> containment_samples, double tol = 1e-8);

struct BetaConvexityReport {
  bool beta_convex = false;
  /// min over (theta, sample) of q . p0(theta) - cos(beta), for the better candidate.
  double margin = 0.0;
  std::optional<double> first_failure_theta;
  int n_boundary = 0;
  int n_domain = 0;
  double tolerance = 1e-8;
};

BetaConvexityReport is_beta_convex(const SphericalBoundary& boundary, double beta,
                                   int n_boundary = 256, int n_domain = 2048);

struct ConvexityReport {
  bool convex = false;
  /// Largest signed distance found on the wrong side of a supporting great circle.
  double worst_violation = 0.0;
};

/// Convexity of the cone spanned by the domain, via the supporting planes
/// span{gamma_hat, gamma_hat'} at n_samples boundary points.
ConvexityReport convexity(const SphericalBoundary& boundary, int n_samples, int n_domain = 2048);
bool is_convex(const SphericalBoundary& boundary, int n_samples);

/// -1 when Det[gamma', gamma, p0] < 0 at every sample (positive orientation),
/// +1 when > 0 everywhere. Throws SignChange otherwise.
int orientation_sign(const SphericalBoundary& boundary, double beta, int n_samples = 256,
                     int n_domain = 2048);

/// Validates g > 0 and Gamma inside the closed vertical cone of angle beta.
/// Throws OutOfRange for g <= 0, CurveLeavesCone when Gamma exits the cone.
RadialGraphCurve build_curve(const SphericalBoundary& boundary, const FourierSeries& g,
                             double beta);

}  // namespace hcone
