#include "hcone/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hcone {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 spherical(double colat, double phi) {
  return {std::sin(colat) * std::cos(phi), std::sin(colat) * std::sin(phi), std::cos(colat)};
}

double min_dot(std::span<const UnitVec> samples, const Vec3& axis) {
  double m = std::numeric_limits<double>::infinity();
  for (const UnitVec& q : samples) m = std::min(m, q.dot(axis));
  return m;
}

}  // namespace

double FourierSeries::value(double phi) const {
  double v = a0;
  for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::cos((k + 1) * phi);
  for (std::size_t k = 0; k < b.size(); ++k) v += b[k] * std::sin((k + 1) * phi);
  return v;
}

double FourierSeries::derivative(double phi) const {
  double v = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) v -= (k + 1) * a[k] * std::sin((k + 1) * phi);
  for (std::size_t k = 0; k < b.size(); ++k) v += (k + 1) * b[k] * std::cos((k + 1) * phi);
  return v;
}

SphericalBoundary SphericalBoundary::cap(double alpha_c) { return perturbed_cap(alpha_c, {}, {}); }

SphericalBoundary SphericalBoundary::perturbed_cap(double alpha_c, std::vector<double> a,
                                                   std::vector<double> b) {
  if (a.size() > kMaxOrder || b.size() > kMaxOrder) {
    throw OutOfRange("perturbed cap supports Fourier order up to 8");
  }
  SphericalBoundary s;
  s.colatitude_ = FourierSeries{alpha_c, std::move(a), std::move(b)};
  for (int i = 0; i < 4096; ++i) {
    const double alpha = s.colatitude_.value(kTwoPi * i / 4096);
    if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
      throw OutOfRange("cap colatitude must stay inside (0, pi)");
    }
  }
  return s;
}

SphericalBoundary SphericalBoundary::reversed() const {
  SphericalBoundary s = *this;
  s.direction_ = -direction_;
  return s;
}

SphericalBoundary SphericalBoundary::shifted(double dtheta) const {
  SphericalBoundary s = *this;
  s.phase_ += direction_ * dtheta;
  return s;
}

UnitVec SphericalBoundary::point(double theta) const {
  const double phi = azimuth(theta);
  return UnitVec::normalized(spherical(colatitude_.value(phi), phi));
}

Vec3 SphericalBoundary::tangent(double theta) const {
  const double phi = azimuth(theta);
  const double al = colatitude_.value(phi);
  const double dal = colatitude_.derivative(phi);
  const Vec3 d_colat(std::cos(al) * std::cos(phi), std::cos(al) * std::sin(phi), -std::sin(al));
  const Vec3 d_phi(-std::sin(al) * std::sin(phi), std::sin(al) * std::cos(phi), 0.0);
  return direction_ * (dal * d_colat + d_phi);
}

std::vector<UnitVec> SphericalBoundary::domain_samples(int n) const {
  n = std::max(n, 16);
  const int rings = std::max(2, static_cast<int>(std::lround(std::sqrt(n / std::numbers::pi))));
  // ring i holds about n * i / sum(i) points
  const double weight_sum = 0.5 * rings * (rings + 1);
  std::vector<UnitVec> out;
  out.reserve(n + rings * 8);
  out.push_back(UnitVec::checked(Vec3::UnitZ()));
  for (int i = 1; i <= rings; ++i) {
    const double rho = static_cast<double>(i) / rings;
    const int count = std::max(8, static_cast<int>(std::lround((n - 1) * i / weight_sum)));
    for (int j = 0; j < count; ++j) {
      const double phi = kTwoPi * j / count;
      out.push_back(UnitVec::normalized(spherical(rho * colatitude_.value(phi), phi)));
    }
  }
  return out;
}

Vec3 RadialGraphCurve::point(double theta) const { return g(theta) * boundary_.point(theta).vec(); }

Vec3 RadialGraphCurve::tangent(double theta) const {
  const double phi = boundary_.azimuth(theta);
  return boundary_.direction() * g_.derivative(phi) * boundary_.point(theta).vec() +
         g_.value(phi) * boundary_.tangent(theta);
}

double RadialGraphCurve::min_g(int samples) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) m = std::min(m, g_.value(kTwoPi * i / samples));
  return m;
}

std::vector<double> RadialGraphCurve::arclength_parameters(int n) const {
  const int m = std::max(64 * n, 4096);
  std::vector<double> cumulative(m + 1, 0.0);
  double prev_speed = tangent(0.0).norm();
  for (int i = 1; i <= m; ++i) {
    const double speed = tangent(kTwoPi * i / m).norm();
    cumulative[i] = cumulative[i - 1] + 0.5 * (prev_speed + speed) * kTwoPi / m;
    prev_speed = speed;
  }
  const double total = cumulative[m];
  std::vector<double> theta(n);
  for (int j = 0; j < n; ++j) {
    const double target = total * j / n;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
    const int i = std::clamp(static_cast<int>(it - cumulative.begin()), 1, m);
    const double w = (target - cumulative[i - 1]) / (cumulative[i] - cumulative[i - 1]);
    theta[j] = kTwoPi * (i - 1 + w) / m;
  }
  return theta;
}

std::pair<UnitVec, UnitVec> axis_candidates(const SphericalBoundary& boundary, double beta,
                                            double theta) {
  const Vec3 p = boundary.point(theta).vec();
  const Vec3 d = boundary.tangent(theta);
  const double speed = d.norm();
  if (speed < kDegenerateNorm) throw DegenerateInput("boundary curve is not regular");
  const Vec3 binormal = p.cross(d / speed);
  return {UnitVec::normalized(std::cos(beta) * p + std::sin(beta) * binormal),
          UnitVec::normalized(std::cos(beta) * p - std::sin(beta) * binormal)};
}

namespace {

struct AxisChoice {
  UnitVec axis;
  double margin;
};

AxisChoice best_axis(const SphericalBoundary& boundary, double beta, double theta,
                     std::span<const UnitVec> samples) {
  const auto [first, second] = axis_candidates(boundary, beta, theta);
  const double cb = std::cos(beta);
  const double m1 = min_dot(samples, first) - cb;
  const double m2 = min_dot(samples, second) - cb;
  return m1 >= m2 ? AxisChoice{first, m1} : AxisChoice{second, m2};
}

}  // namespace

UnitVec axis_at(const SphericalBoundary& boundary, double beta, double theta,
                std::span<const UnitVec> containment_samples, double tol) {
  const AxisChoice choice = best_axis(boundary, beta, theta, containment_samples);
  if (choice.margin < -tol) throw NotBetaConvexAt(theta);
  return choice.axis;
}

BetaConvexityReport is_beta_convex(const SphericalBoundary& boundary, double beta,
                                   int n_boundary, int n_domain) {
  BetaConvexityReport report;
  const auto samples = boundary.domain_samples(n_domain);
  report.n_boundary = n_boundary;
  report.n_domain = static_cast<int>(samples.size());
  report.margin = std::numeric_limits<double>::infinity();
  report.beta_convex = true;
  for (int i = 0; i < n_boundary; ++i) {
    const double theta = kTwoPi * i / n_boundary;
    const AxisChoice choice = best_axis(boundary, beta, theta, samples);
    report.margin = std::min(report.margin, choice.margin);
    if (choice.margin < -report.tolerance && report.beta_convex) {
      report.beta_convex = false;
      report.first_failure_theta = theta;
    }
  }
  return report;
}

ConvexityReport convexity(const SphericalBoundary& boundary, int n_samples, int n_domain) {
  const auto samples = boundary.domain_samples(n_domain);
  ConvexityReport report;
  report.convex = true;
  constexpr double tol = 1e-9;
  for (int i = 0; i < n_samples; ++i) {
    const double theta = kTwoPi * i / n_samples;
    const Vec3 normal = boundary.point(theta).vec().cross(boundary.tangent(theta)).normalized();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const UnitVec& q : samples) {
      const double s = normal.dot(q.vec());
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    // samples must sit weakly on one side of the supporting plane
    const double violation = std::min(hi, -lo);
    report.worst_violation = std::max(report.worst_violation, violation);
    if (violation > tol) report.convex = false;
  }
  return report;
}

bool is_convex(const SphericalBoundary& boundary, int n_samples) {
  return convexity(boundary, n_samples).convex;
}

int orientation_sign(const SphericalBoundary& boundary, double beta, int n_samples,
                     int n_domain) {
  const auto samples = boundary.domain_samples(n_domain);
  int sign = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double theta = kTwoPi * i / n_samples;
    const UnitVec axis = axis_at(boundary, beta, theta, samples);
    const double det = det3(boundary.tangent(theta), boundary.point(theta), axis);
    const int s = det < -1e-14 ? -1 : (det > 1e-14 ? 1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      throw SignChange("orientation determinant changes sign or vanishes at theta=" +
                       std::to_string(theta));
    }
    sign = s;
  }
  return sign;
}

RadialGraphCurve build_curve(const SphericalBoundary& boundary, const FourierSeries& g,
                             double beta) {
  RadialGraphCurve curve(boundary, g);
  if (!(curve.min_g() > 0.0)) throw OutOfRange("radial factor g must stay positive");
  const ConeSpec cone = ConeSpec::vertical(beta);
  for (int i = 0; i < 4096; ++i) {
    const double theta = kTwoPi * i / 4096;
    const Vec3 p = curve.point(theta);
    if (cone_margin(cone, p) < -1e-12 * p.norm()) {
      throw CurveLeavesCone("boundary curve leaves the cone at theta=" + std::to_string(theta));
    }
  }
  return curve;
}

}  // namespace hcone
