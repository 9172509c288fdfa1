#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "hcone/geometry.hpp"

using namespace hcone;
using std::numbers::pi;

TEST_CASE("radial_project") {
  CHECK((radial_project({0, 0, 2}).vec() - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((radial_project({3, 4, 0}).vec() - Vec3(0.6, 0.8, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(radial_project({1e-15, 0, 0}), DegenerateInput);

  std::mt19937 rng(7);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const Vec3 x(n(rng), n(rng), n(rng));
    const UnitVec p = radial_project(x);
    CHECK(std::abs(p.vec().norm() - 1.0) < 1e-15);
    CHECK((radial_project(p).vec() - p.vec()).norm() < 1e-15);
    CHECK((radial_project(3.7 * x).vec() - p.vec()).norm() < 1e-15);
  }
}

TEST_CASE("unit vectors are checked") {
  CHECK_NOTHROW(UnitVec::checked({0, 0, 1}));
  CHECK_THROWS_AS(UnitVec::checked({0, 0, 1.001}), DegenerateInput);
  CHECK_THROWS_AS(UnitVec::normalized({0, 0, 0}), DegenerateInput);
}

TEST_CASE("cone_margin") {
  const ConeSpec cone = ConeSpec::vertical(pi / 3);
  CHECK(cone_margin(cone, {0, 0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cone_margin(cone, {1, 0, 1}) == doctest::Approx(1.0 - std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(std::abs(cone_margin(cone, 2.5 * Vec3(std::sin(pi / 3), 0, std::cos(pi / 3)))) < 1e-15);
  CHECK(cone_margin(cone, Vec3::Zero()) == 0.0);
  CHECK_THROWS_AS(ConeSpec::vertical(pi / 2), OutOfRange);
  CHECK_THROWS_AS(ConeSpec::vertical(0.0), OutOfRange);

  // positive homogeneity
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng));
    CHECK(cone_margin(cone, 2.5 * x) == doctest::Approx(2.5 * cone_margin(cone, x)).epsilon(1e-13));
  }
}

TEST_CASE("stereographic projection from the south pole") {
  CHECK(stereographic_south(UnitVec::checked({0, 0, 1})).norm() == 0.0);
  CHECK((stereographic_south(UnitVec::checked({1, 0, 0})) - Vec2(1, 0)).norm() < 1e-15);
  CHECK((stereographic_south(UnitVec::checked({0, 0.6, 0.8})) - Vec2(0, 1.0 / 3)).norm() < 1e-15);
  CHECK_THROWS_AS(stereographic_south(UnitVec::checked({0, 0, -1})), PoleSingularity);

  std::mt19937 rng(11);
  std::normal_distribution<double> n;
  for (int i = 0; i < 200; ++i) {
    const UnitVec p = UnitVec::normalized({n(rng), n(rng), std::abs(n(rng)) - 0.5});
    const Vec3 back = stereographic_south_inverse(stereographic_south(p));
    CHECK((back - p.vec()).norm() < 1e-12);
  }
}

TEST_CASE("c_beta") {
  CHECK(c_beta(pi / 3) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(c_beta(1e-8) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c_beta(pi / 2 - 1e-9) < 1e-9);
  for (double b = 0.05; b < 1.5; b += 0.05) CHECK(c_beta(b + 0.01) < c_beta(b));
  CHECK_THROWS_AS(c_beta(0.0), OutOfRange);
  CHECK_THROWS_AS(c_beta(pi / 2), OutOfRange);
}

TEST_CASE("winding_degree") {
  std::vector<Vec2> loop;
  for (int i = 0; i < 64; ++i) loop.emplace_back(std::cos(2 * pi * i / 64), std::sin(2 * pi * i / 64));
  CHECK(winding_degree(loop, {0, 0}) == 1);
  CHECK(winding_degree(loop, {2, 0}) == 0);
  CHECK_THROWS_AS(winding_degree(loop, {1, 0}), PointOnCurve);

  std::vector<Vec2> rev(loop.rbegin(), loop.rend());
  CHECK(winding_degree(rev, {0.3, -0.2}) == -1);

  // cyclic relabeling
  for (int s : {1, 17, 40}) {
    std::vector<Vec2> rot(loop.begin() + s, loop.end());
    rot.insert(rot.end(), loop.begin(), loop.begin() + s);
    CHECK(winding_degree(rot, {0.1, 0.2}) == 1);
  }

  // doubly traversed loop
  std::vector<Vec2> twice = loop;
  twice.insert(twice.end(), loop.begin(), loop.end());
  CHECK(winding_degree(twice, {0, 0}) == 2);
}

TEST_CASE("rotation_to_north") {
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const UnitVec p = UnitVec::normalized({n(rng), n(rng), n(rng)});
    const Mat3 r = rotation_to_north(p);
    CHECK((r * p.vec() - Vec3::UnitZ()).norm() < 1e-13);
    CHECK((r.transpose() * r - Mat3::Identity()).norm() < 1e-13);
    CHECK(r.determinant() == doctest::Approx(1.0));
  }
  const Mat3 r = rotation_to_north(UnitVec::checked({0, 0, -1}));
  CHECK((r * Vec3(0, 0, -1) - Vec3::UnitZ()).norm() < 1e-15);
}
