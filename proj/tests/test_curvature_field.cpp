#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "hcone/curvature_field.hpp"

using namespace hcone;
using std::numbers::pi;

namespace {

// random points inside the vertical cone of half-angle 1.2, |p| in [0.2, 3]
std::vector<Vec3> cone_samples(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> r(0.2, 3.0), psi(0.0, 1.2), phi(0.0, 2 * pi);
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) {
    const double a = psi(rng), b = phi(rng), s = r(rng);
    out.push_back(s * Vec3(std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a)));
  }
  return out;
}

double divergence(const CurvatureField& f, const Vec3& p, double h) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) {
    Vec3 e = Vec3::Zero();
    e[k] = h;
    d += (build_potential_Q(f, p + e)[k] - build_potential_Q(f, p - e)[k]) / (2 * h);
  }
  return d;
}

std::vector<CurvatureField> families() {
  FieldTable t;
  t.radii = {0.1, 1.0, 2.0, 4.0};
  t.colatitudes = {0.0, 0.5, 1.0, 1.5};
  for (double r : t.radii)
    for (double a : t.colatitudes) t.values.push_back(0.1 / r + 0.01 * a);
  return {CurvatureField::constant(0.3),  CurvatureField::radial(0.15),
          CurvatureField::power(0.1, 0.5), CurvatureField::power(0.1, -0.5),
          CurvatureField::modulated(0.1, 0.05), CurvatureField::tabulated(t)};
}

}  // namespace

TEST_CASE("builtin evaluations") {
  const Vec3 p(0, 3, 4);
  CHECK(CurvatureField::zero().eval(p) == 0.0);
  CHECK(CurvatureField::constant(0.7).eval(p) == 0.7);
  CHECK(CurvatureField::radial(0.5).eval(p) == doctest::Approx(0.1));
  CHECK(CurvatureField::power(0.5, 1.0).eval(p) == doctest::Approx(0.02));
  CHECK(CurvatureField::modulated(0.5, 0.5).eval(p) == doctest::Approx((0.5 + 0.4) / 5));
  CHECK(CurvatureField::radial(0.5).scaled(0.5).eval(p) == doctest::Approx(0.05));
  CHECK_THROWS_AS(CurvatureField::power(1.0, 2.0), OutOfRange);
  CHECK_THROWS_AS(CurvatureField::power(1.0, -1.0), OutOfRange);
}

TEST_CASE("gradients match finite differences") {
  for (const CurvatureField& f : families()) {
    if (f.family() == FieldFamily::tabulated) continue;  // piecewise bilinear
    for (const Vec3& p : cone_samples(50, 1)) {
      const Vec3 g = f.grad(p);
      Vec3 fd;
      const double h = 1e-6;
      for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = h;
        fd[k] = (f.eval(p + e) - f.eval(p - e)) / (2 * h);
      }
      CHECK((g - fd).norm() <= 1e-5 * std::max(g.norm(), std::abs(f.eval(p)) / p.norm()));
    }
  }
}

TEST_CASE("potential Q closed forms") {
  const Vec3 p(0.3, -0.4, 1.2);
  CHECK((build_potential_Q(CurvatureField::constant(0.9), p) - 0.3 * p).norm() < 1e-14);
  for (double s : {0.5, 1.0, 2.0, 10.0}) {
    const Vec3 q = build_potential_Q(CurvatureField::radial(0.2), s * p);
    CHECK(q.norm() == doctest::Approx(0.1).epsilon(1e-13));
    CHECK((q.normalized() - p.normalized()).norm() < 1e-14);
  }
  // power(c, s): |Q| = c |p|^-s / (2 - s)
  const Vec3 qp = build_potential_Q(CurvatureField::power(0.1, 0.5), p);
  CHECK(qp.norm() == doctest::Approx(0.1 / std::sqrt(p.norm()) / 1.5).epsilon(1e-12));
  CHECK(build_potential_Q(CurvatureField::zero(), Vec3::Zero()).norm() == 0.0);
  CHECK_THROWS_AS(build_potential_Q(CurvatureField::radial(0.2), Vec3::Zero()), FieldOutOfDomain);
}

TEST_CASE("divergence of Q is H") {
  for (const CurvatureField& f : families()) {
    if (f.family() == FieldFamily::tabulated) continue;
    for (const Vec3& p : cone_samples(100, 2)) {
      const double d = divergence(f, p, 1e-4 * p.norm());
      CHECK(std::abs(d - f.eval(p)) <= 1e-6 * std::abs(f.eval(p)));
    }
  }
}

TEST_CASE("growth margins") {
  const double beta = pi / 3;
  const auto samples = cone_samples(200, 3);
  CHECK(check_growth(CurvatureField::zero(), beta, samples) == doctest::Approx(c_beta(beta)));
  CHECK(std::abs(check_growth(CurvatureField::radial(c_beta(beta)), beta, samples)) < 1e-15);
  CHECK(check_growth(CurvatureField::radial(0.9 * c_beta(beta)), beta, samples) ==
        doctest::Approx(0.1 / 6).epsilon(1e-13));
}

TEST_CASE("monotonicity margins") {
  const auto samples = cone_samples(200, 4);
  CHECK(std::abs(check_monotonicity(CurvatureField::radial(0.15), samples)) <= 1e-12);
  CHECK(check_monotonicity(CurvatureField::constant(0.2), samples) == doctest::Approx(0.2));
  // c s < 0: margin -c s / |p|^(1+s), smallest at the largest |p|
  const CurvatureField f = CurvatureField::power(0.1, -0.5);
  double expect = 1e300;
  for (const Vec3& p : samples) expect = std::min(expect, 0.05 / std::pow(p.norm(), 0.5));
  CHECK(check_monotonicity(f, samples) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(check_monotonicity(CurvatureField::power(0.1, 0.5), samples) < 0.0);
}

TEST_CASE("tabulated fields clamp outside the grid") {
  FieldTable t;
  t.radii = {1.0, 2.0};
  t.colatitudes = {0.0, 0.5};
  t.values = {1.0, 2.0, 3.0, 4.0};
  const CurvatureField f = CurvatureField::tabulated(t);
  CHECK(f.eval({0, 0, 1.5}) == doctest::Approx(2.0));
  CHECK(f.clamped_evaluations() == 0);
  CHECK(f.eval({0, 0, 10.0}) == doctest::Approx(3.0));
  CHECK(f.clamped_evaluations() == 1);
  t.values.pop_back();
  CHECK_THROWS_AS(CurvatureField::tabulated(t), OutOfRange);
}
