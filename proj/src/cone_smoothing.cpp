#include "hcone/cone_smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hcone {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
const double kSqrt3 = std::sqrt(3.0);

bool delta_admissible(double beta, double delta) {
  if (!(beta - delta > 0.0 && beta + delta < kHalfPi)) return false;
  return c_beta(beta - delta) < 0.5 / std::tan(beta + delta);
}

}  // namespace

double SmoothedConeProfile::alpha1(double t) const { return std::sin(angle()) * t; }
double SmoothedConeProfile::alpha1_d(double) const { return std::sin(angle()); }
double SmoothedConeProfile::alpha1_dd(double) const { return 0.0; }

double SmoothedConeProfile::alpha2(double t) const {
  if (t <= t_eps) return (a_eps * t * t + b_eps) * t * t + c_eps;
  return std::cos(angle()) * t;
}

double SmoothedConeProfile::alpha2_d(double t) const {
  if (t <= t_eps) return 4.0 * a_eps * t * t * t + 2.0 * b_eps * t;
  return std::cos(angle());
}

double SmoothedConeProfile::alpha2_dd(double t) const {
  if (t <= t_eps) return 12.0 * a_eps * t * t + 2.0 * b_eps;
  return 0.0;
}

double select_delta(double beta, double grid_step) {
  if (!(beta > 0.0 && beta < kHalfPi)) throw OutOfRange("beta must lie in (0, pi/2)");
  if (!(grid_step > 0.0)) throw OutOfRange("grid_step must be positive");

  double best = 0.0;
  for (int k = 1;; ++k) {
    const double delta = k * grid_step;
    if (!delta_admissible(beta, delta)) break;
    best = delta;
  }
  if (best > 0.0) return best;

  // The inequality holds strictly at delta = 0, so it holds on some (0, d].
  double lo = 0.0, hi = grid_step;
  for (int it = 0; it < 200 && !delta_admissible(beta, hi); ++it) hi *= 0.5;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (delta_admissible(beta, mid)) lo = mid;
    else hi = mid;
  }
  return delta_admissible(beta, hi) ? hi : std::max(lo, hi * 0.5);
}

SmoothedConeProfile make_profile(double beta, double delta, double eps) {
  const double angle = beta + delta;
  if (!(angle > 0.0 && angle < kHalfPi)) throw OutOfRange("beta + delta must lie in (0, pi/2)");
  if (!(eps > 0.0)) throw OutOfRange("eps must be positive");
  const double cos_a = std::cos(angle);
  const double q = 3.0 / 8.0;
  SmoothedConeProfile p;
  p.beta = beta;
  p.delta = delta;
  p.eps = eps;
  p.t_eps = 8.0 / (3.0 * kSqrt3) * eps / cos_a;
  p.a_eps = -kSqrt3 * std::pow(q, 4) * std::pow(cos_a, 4) / (eps * eps * eps);
  p.b_eps = 2.0 * kSqrt3 * q * q * cos_a * cos_a / eps;
  p.c_eps = eps / kSqrt3;
  return p;
}

Vec3 profile_point(const SmoothedConeProfile& profile, double t, double theta) {
  const double r = profile.alpha1(t);
  return {r * std::cos(theta), r * std::sin(theta), profile.alpha2(t)};
}

double revolution_mean_curvature(double a1, double a1_d, double a1_dd, double a2_d,
                                 double a2_dd) {
  if (!(a1 > 0.0)) throw AxisSingularity("revolution curvature needs alpha1 > 0");
  const double speed2 = a1_d * a1_d + a2_d * a2_d;
  if (!(speed2 > 0.0)) throw DegenerateInput("profile curve is singular");
  const double num = a1 * (a1_d * a2_dd - a2_d * a1_dd) + a2_d * speed2;
  return num / (2.0 * a1 * std::pow(speed2, 1.5));
}

double profile_mean_curvature(const SmoothedConeProfile& profile, double t) {
  const double te = t > 0.0 ? t : 1e-6 * profile.t_eps;
  return revolution_mean_curvature(profile.alpha1(te), profile.alpha1_d(te),
                                   profile.alpha1_dd(te), profile.alpha2_d(te),
                                   profile.alpha2_dd(te));
}

double cap_curvature_lower_bound(const SmoothedConeProfile& profile, double t) {
  const double s = std::sin(profile.angle());
  const double c = std::cos(profile.angle());
  const double q = 3.0 / 8.0;
  const double e = profile.eps;
  const double k4 = 4.0 * kSqrt3 * std::pow(q, 4) * std::pow(c, 4) / (e * e * e);
  const double k2 = 4.0 * kSqrt3 * q * q * c * c / e;
  const double num = -k4 * t * t + k2;
  const double inner = -k4 * t * t * t + k2 * t;
  return num / (2.0 * s * std::sqrt(s * s + inner * inner));
}

CapCurvatureScan scan_cap_curvature(const SmoothedConeProfile& profile, int n_samples) {
  if (n_samples < 64) throw OutOfRange("cap curvature scan needs at least 64 samples");
  CapCurvatureScan scan;
  scan.min_curvature = std::numeric_limits<double>::infinity();
  scan.min_bound_slack = std::numeric_limits<double>::infinity();
  scan.samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    const double t = profile.t_eps * i / (n_samples - 1);
    const double h = profile_mean_curvature(profile, t);
    if (h < scan.min_curvature) {
      scan.min_curvature = h;
      scan.argmin_t = t;
    }
    scan.min_bound_slack = std::min(scan.min_bound_slack, (h - cap_curvature_lower_bound(profile, t)) / h);
  }
  return scan;
}

double min_cap_curvature(const SmoothedConeProfile& profile, int n_samples) {
  return scan_cap_curvature(profile, n_samples).min_curvature;
}

JunctionJumps junction_jumps(const SmoothedConeProfile& p) {
  const double t = p.t_eps;
  const double c = std::cos(p.angle());
  JunctionJumps j;
  j.value = std::abs((p.a_eps * t * t + p.b_eps) * t * t + p.c_eps - c * t);
  j.slope = std::abs(4.0 * p.a_eps * t * t * t + 2.0 * p.b_eps * t - c);
  j.curvature = std::abs(12.0 * p.a_eps * t * t + 2.0 * p.b_eps);
  return j;
}

EnclosureCurvatureReport check_enclosure_curvature(const SmoothedConeProfile& profile,
                                                   const CurvatureField& field, int n_samples,
                                                   double t_max_factor) {
  if (n_samples < 2) throw OutOfRange("need at least two samples");
  if (!(t_max_factor > 1.0)) throw OutOfRange("t_max_factor must exceed 1");
  EnclosureCurvatureReport r;
  const double inf = std::numeric_limits<double>::infinity();
  r.cap_margin = r.cone_margin = r.cone_scaled_margin = inf;
  r.t_max = t_max_factor * profile.t_eps;
  r.t_samples = 2 * n_samples;
  r.theta_samples = std::max(8, n_samples / 4);

  for (int i = 0; i < r.t_samples; ++i) {
    const bool cap = i < n_samples;
    const double t = cap ? profile.t_eps * i / (n_samples - 1)
                         : profile.t_eps + (r.t_max - profile.t_eps) * (i - n_samples + 1) /
                                               static_cast<double>(n_samples);
    const double hs = profile_mean_curvature(profile, t);
    for (int k = 0; k < r.theta_samples; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / r.theta_samples;
      const double gap = hs - std::abs(field.eval(profile_point(profile, t, theta)));
      if (cap) {
        r.cap_margin = std::min(r.cap_margin, gap);
      } else {
        r.cone_margin = std::min(r.cone_margin, gap);
        r.cone_scaled_margin = std::min(r.cone_scaled_margin, t * gap);
      }
    }
  }
  r.margin = std::min(r.cap_margin, r.cone_margin);
  return r;
}

}  // namespace hcone
