#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hcone/boundary.hpp"
#include "oracles.hpp"

using namespace hcone;
using std::numbers::pi;

TEST_CASE("spherical boundary geometry") {
  const SphericalBoundary b = SphericalBoundary::perturbed_cap(0.7, {0.05, 0.0, 0.02}, {0.03});
  for (double t = 0.0; t < 2 * pi; t += 0.1) {
    const Vec3 p = b.point(t).vec();
    const Vec3 d = b.tangent(t);
    CHECK(std::abs(p.norm() - 1.0) < 1e-14);
    CHECK(std::abs(p.dot(d)) < 1e-14);
    CHECK(d.norm() > 0.1);
    const double h = 1e-6;
    CHECK((d - (b.point(t + h).vec() - b.point(t - h).vec()) / (2 * h)).norm() < 1e-8);
  }
  CHECK_THROWS_AS(SphericalBoundary::perturbed_cap(0.5, std::vector<double>(9, 0.0), {}), OutOfRange);
  CHECK_THROWS_AS(SphericalBoundary::perturbed_cap(0.5, {0.6}, {}), OutOfRange);

  // reversal and shift reparametrize the same point set
  const SphericalBoundary r = b.reversed();
  const SphericalBoundary s = b.shifted(0.4);
  CHECK((r.point(0.3).vec() - b.point(-0.3).vec()).norm() < 1e-14);
  CHECK((s.point(0.3).vec() - b.point(0.7).vec()).norm() < 1e-14);
}

TEST_CASE("axis_at") {
  const double beta = 0.8;
  const SphericalBoundary cap = SphericalBoundary::cap(beta);
  const auto samples = cap.domain_samples(2048);
  for (double t = 0.0; t < 2 * pi; t += 0.3) {
    CHECK((axis_at(cap, beta, t, samples).vec() - Vec3::UnitZ()).norm() < 1e-10);
  }
  CHECK_THROWS_AS(axis_at(SphericalBoundary::cap(0.9), 0.8, 0.0,
                          SphericalBoundary::cap(0.9).domain_samples(2048)),
                  NotBetaConvexAt);

  // constraints and continuity on a perturbed cap
  const SphericalBoundary b = SphericalBoundary::perturbed_cap(0.6, {0.02}, {0.01, 0.01});
  const auto bs = b.domain_samples(2048);
  UnitVec prev = axis_at(b, 1.0, 0.0, bs);
  const double dt = 2 * pi / 512;
  double lipschitz = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double t = i * dt;
    const UnitVec a = axis_at(b, 1.0, t, bs);
    CHECK(std::abs(a.vec().norm() - 1.0) < 1e-12);
    CHECK(std::abs(a.dot(b.point(t).vec()) - std::cos(1.0)) < 1e-10);
    CHECK(std::abs(a.dot(b.tangent(t))) < 1e-10);
    if (i > 0) lipschitz = std::max(lipschitz, std::acos(std::min(1.0, a.dot(prev.vec()))) / dt);
    prev = a;
  }
  CHECK(lipschitz < 2.0);
}

TEST_CASE("beta-convexity of caps agrees with the sampling oracle") {
  for (double alpha : {0.3, 0.7, 1.1}) {
    for (double beta : {0.25, 0.5, 0.75, 1.0, 1.25}) {
      if (std::abs(alpha - beta) < 0.02) continue;
      const SphericalBoundary cap = SphericalBoundary::cap(alpha);
      const auto dense = oracle::domain_points(cap, 20, 60);
      const bool expect = oracle::beta_cone_condition(cap, beta, 4, 360, dense, 0.01);
      const BetaConvexityReport r = is_beta_convex(cap, beta);
      CHECK(r.beta_convex == expect);
      CHECK(r.beta_convex == (alpha <= beta));
      CHECK(r.n_boundary == 256);
      if (!r.beta_convex) CHECK(r.first_failure_theta.has_value());
    }
  }
  // monotone in beta for a fixed cap
  bool seen = false;
  for (double beta = 0.3; beta < 1.5; beta += 0.1) {
    const bool bc = is_beta_convex(SphericalBoundary::cap(0.62), beta).beta_convex;
    CHECK((!seen || bc));
    seen = seen || bc;
  }
  CHECK(seen);
}

TEST_CASE("convexity") {
  CHECK(is_convex(SphericalBoundary::cap(0.4), 256));
  CHECK(is_convex(SphericalBoundary::cap(1.4), 256));
  CHECK_FALSE(is_convex(SphericalBoundary::perturbed_cap(0.6, {0.0, 0.0, 0.24}, {}), 256));

  // every beta-convex domain is convex
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> alpha(0.3, 0.9), coef(-1.0, 1.0);
  int beta_convex = 0;
  for (int i = 0; i < 50; ++i) {
    const double ac = alpha(rng);
    std::vector<double> a, b;
    for (int k = 1; k <= 4; ++k) {
      a.push_back(0.03 * coef(rng) / (k * k));
      b.push_back(0.03 * coef(rng) / (k * k));
    }
    const SphericalBoundary dom = SphericalBoundary::perturbed_cap(ac, a, b);
    if (!is_beta_convex(dom, ac + 0.25).beta_convex) continue;
    ++beta_convex;
    CHECK(is_convex(dom, 256));
  }
  CHECK(beta_convex >= 40);
}

TEST_CASE("orientation sign") {
  const SphericalBoundary cap = SphericalBoundary::cap(0.8);
  CHECK(orientation_sign(cap, 0.8) == -1);
  CHECK(orientation_sign(cap.reversed(), 0.8) == 1);
  const SphericalBoundary b = SphericalBoundary::perturbed_cap(0.6, {0.02}, {0.01});
  CHECK(orientation_sign(b, 1.0) == -1);
  CHECK(orientation_sign(b.shifted(1.3), 1.0) == -1);
  CHECK(orientation_sign(b.shifted(1.3).reversed(), 1.0) == 1);
  // closed form with p0 = e3 on the cap alpha_c = beta
  const double d = det3(cap.tangent(0.5), cap.point(0.5).vec(), Vec3::UnitZ());
  CHECK(d == doctest::Approx(-std::pow(std::sin(0.8), 2)).epsilon(1e-14));
}

TEST_CASE("build_curve") {
  const double beta = pi / 3;
  const ConeSpec cone = ConeSpec::vertical(beta);
  const RadialGraphCurve on = build_curve(SphericalBoundary::cap(beta), FourierSeries::constant(1.0), beta);
  for (double t = 0.0; t < 2 * pi; t += 0.5) {
    CHECK(std::abs(on.point(t).norm() - 1.0) < 1e-15);
    CHECK(std::abs(cone_margin(cone, on.point(t))) < 1e-15);
  }
  const RadialGraphCurve in = build_curve(SphericalBoundary::cap(beta / 2), FourierSeries::constant(2.0), beta);
  CHECK(cone_margin(cone, in.point(1.0)) ==
        doctest::Approx(2 * (std::cos(beta / 2) - std::cos(beta))).epsilon(1e-14));
  CHECK_NOTHROW(build_curve(SphericalBoundary::cap(0.5), FourierSeries{1.0, {0.3}, {}}, beta));
  CHECK_THROWS_AS(build_curve(SphericalBoundary::cap(0.5), FourierSeries{1.0, {1.2}, {}}, beta),
                  OutOfRange);
  CHECK_THROWS_AS(build_curve(SphericalBoundary::cap(1.1), FourierSeries::constant(1.0), beta),
                  CurveLeavesCone);

  // curve derivative against finite differences
  const RadialGraphCurve c = build_curve(SphericalBoundary::perturbed_cap(0.6, {0.03}, {}),
                                         FourierSeries{1.0, {0.1}, {0.05}}, beta);
  for (double t : {0.0, 1.0, 4.0}) {
    const double h = 1e-6;
    CHECK((c.tangent(t) - (c.point(t + h) - c.point(t - h)) / (2 * h)).norm() < 1e-8);
  }
}

TEST_CASE("arclength parameters") {
  const RadialGraphCurve c(SphericalBoundary::perturbed_cap(0.6, {0.05}, {}), FourierSeries{1.0, {0.2}, {}});
  const auto theta = c.arclength_parameters(64);
  CHECK(theta.size() == 64);
  CHECK(theta[0] == 0.0);
  // equal arc steps: compare consecutive arc lengths by fine integration
  auto arc = [&](double a, double b) {
    double s = 0.0;
    for (int i = 0; i < 400; ++i) s += c.tangent(a + (b - a) * (i + 0.5) / 400).norm() * (b - a) / 400;
    return s;
  };
  const double first = arc(theta[0], theta[1]);
  for (int j = 1; j + 1 < 64; ++j) {
    CHECK(theta[j + 1] > theta[j]);
    CHECK(arc(theta[j], theta[j + 1]) == doctest::Approx(first).epsilon(1e-5));
  }
}
