#pragma once

#include "hcone/curvature_field.hpp"
#include "hcone/geometry.hpp"

namespace hcone {

/// Surface of revolution about e3 that follows the cone of half-angle
/// beta + delta for t > t_eps and closes it with a quartic cap near the axis:
///
///   alpha1(t) = sin(beta+delta) t
///   alpha2(t) = a t^4 + b t^2 + c   on [0, t_eps]
///             = cos(beta+delta) t   beyond t_eps
///
/// The coefficients make alpha2 C^2 across t_eps and keep the origin outside.
struct SmoothedConeProfile {
  double beta = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  double t_eps = 0.0;
  double a_eps = 0.0;
  double b_eps = 0.0;
  double c_eps = 0.0;

  double angle() const noexcept { return beta + delta; }

  double alpha1(double t) const;
  double alpha1_d(double t) const;
  double alpha1_dd(double t) const;
  double alpha2(double t) const;
  double alpha2_d(double t) const;
  double alpha2_dd(double t) const;
};

/// Largest grid value delta with beta +- delta in (0, pi/2) such that
/// c_{beta-delta'} < cot(beta+delta')/2 for every grid delta' up to delta.
/// Falls back to bisection below grid_step when the first grid point fails.
double select_delta(double beta, double grid_step = 1e-3);

SmoothedConeProfile make_profile(double beta, double delta, double eps);

Vec3 profile_point(const SmoothedConeProfile& profile, double t, double theta);

/// Inward mean curvature of the surface obtained by rotating (alpha1, 0, alpha2).
/// Throws AxisSingularity when alpha1 <= 0.
double revolution_mean_curvature(double a1, double a1_d, double a1_dd, double a2_d, double a2_dd);

/// Mean curvature of the profile surface at parameter t. At t = 0 the closed
/// formula is 0/0; it is evaluated one-sidedly at t = 1e-6 t_eps.
double profile_mean_curvature(const SmoothedConeProfile& profile, double t);

/// Lower bound alpha2' / (2 alpha1 sqrt(alpha1'^2 + alpha2'^2)) on the cap branch,
/// written out in terms of the coefficients. At t = 0 its limit b/sin^2 is used.
double cap_curvature_lower_bound(const SmoothedConeProfile& profile, double t);

struct CapCurvatureScan {
  double min_curvature = 0.0;
  double argmin_t = 0.0;
  /// min over samples of (H_S(t) - lower_bound(t)) / H_S(t). The bound is an
  /// equality at t_eps, so this sits at roundoff level (~1e-15) there.
  double min_bound_slack = 0.0;
  int samples = 0;
};

CapCurvatureScan scan_cap_curvature(const SmoothedConeProfile& profile, int n_samples);

/// min over uniformly spaced t in [0, t_eps] of the profile mean curvature.
/// Requires n_samples >= 64.
double min_cap_curvature(const SmoothedConeProfile& profile, int n_samples);

struct JunctionJumps {
  double value = 0.0;      // |alpha2(t_eps-) - alpha2(t_eps+)|
  double slope = 0.0;      // first-derivative jump
  double curvature = 0.0;  // second-derivative jump

  /// value <= 1e-10 eps, slope <= 1e-10, curvature <= 1e-8 / eps.
  bool within_tolerance(double eps) const noexcept {
    return value <= 1e-10 * eps && slope <= 1e-10 && curvature <= 1e-8 / eps;
  }
};

JunctionJumps junction_jumps(const SmoothedConeProfile& profile);

struct EnclosureCurvatureReport {
  double cap_margin = 0.0;          // min over cap samples of H_S - |H|
  double cone_margin = 0.0;         // min over cone-branch samples of H_S - |H|
  double cone_scaled_margin = 0.0;  // min over cone-branch samples of t (H_S - |H|)
  double margin = 0.0;              // min(cap_margin, cone_margin)
  double t_max = 0.0;
  int t_samples = 0;
  int theta_samples = 0;
  bool pass() const noexcept { return margin > 0.0; }
};

/// Samples the profile surface on t in [0, t_max] (t_max = t_max_factor * t_eps)
/// and reports how far the surface mean curvature dominates |H| there.
EnclosureCurvatureReport check_enclosure_curvature(const SmoothedConeProfile& profile,
                                                   const CurvatureField& field, int n_samples,
                                                   double t_max_factor = 8.0);

}  // namespace hcone
