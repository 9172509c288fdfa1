// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "hcone/cone_smoothing.hpp"
#include "hcone/pipeline.hpp"
#include "hcone/verifier.hpp"
#include "oracles.hpp"

using namespace hcone;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::shared_ptr<const DiskMesh> mesh_ptr(int n_theta) {
  return std::make_shared<const DiskMesh>(build_disk_mesh(n_theta / 4, n_theta));
}

RadialGraphCurve circle(double r, double h) {
  return RadialGraphCurve(SphericalBoundary::cap(std::atan2(r, h)), FourierSeries::constant(std::hypot(r, h)));
}

void flat_disk(Outcome& o) {
  const double r = 1.0, h = 2.0;
  auto mesh = mesh_ptr(64);
  const SurfaceState s = solve(mesh, circle(r, h), CurvatureField::zero(), SolveConfig{});
  double err = 0.0;
  for (int v = 0; v < mesh->num_vertices(); ++v) {
    err = std::max(err, (s.X[v] - Vec3(r * mesh->uv[v].x(), r * mesh->uv[v].y(), h)).norm());
  }
  const double defect = conformality_defect(s);
  const double f_rel = std::abs(energy_F(s, CurvatureField::zero()) - pi * r * r) / (pi * r * r);
  o.detail << "max vertex error " << err << ", defect " << defect << ", |F-pi|/pi " << f_rel;
  o.require(err <= 1e-8, "vertex error");
  o.require(defect <= 1e-10, "conformality defect");
  o.require(f_rel <= 1e-6, "energy");
}

void spherical_cap(Outcome& o) {
  const double R = 2.0, r = 1.0, h = 2.0;
  const Vec3 center(0, 0, h + std::sqrt(R * R - r * r));
  double errs[2];
  int k = 0;
  for (int nt : {32, 64}) {
    const SurfaceState s = solve(mesh_ptr(nt), circle(r, h), CurvatureField::constant(1 / R), SolveConfig{});
    double e = 0.0;
    for (const Vec3& x : s.X) e = std::max(e, std::abs((x - center).norm() - R));
    errs[k++] = e;
  }
  const double order = std::log2(errs[0] / errs[1]);
  o.detail << "error " << errs[0] << " -> " << errs[1] << ", order " << order;
  o.require(errs[1] <= 5e-3, "sphere distance");
  o.require(order >= 1.8, "convergence order");
}

void smoothed_cone(Outcome& o) {
  double worst_branch = 0.0, min_ratio = 1e300, min_slack = 1e300;
  int junction_fail = 0;
  for (double beta : {pi / 6, pi / 4, pi / 3}) {
    const double delta = select_delta(beta);
    double prev = 0.0;
    for (double eps : {0.1, 0.05, 0.025}) {
      const SmoothedConeProfile p = make_profile(beta, delta, eps);
      if (!junction_jumps(p).within_tolerance(eps)) ++junction_fail;
      for (int i = 1; i <= 200; ++i) {
        const double t = p.t_eps * (1.0 + 9.0 * i / 200);
        const double expect = 0.5 / (std::tan(p.angle()) * t);
        worst_branch = std::max(worst_branch, std::abs(profile_mean_curvature(p, t) - expect) / expect);
      }
      const CapCurvatureScan scan = scan_cap_curvature(p, 512);
      min_slack = std::min(min_slack, scan.min_bound_slack);
      if (prev > 0.0) min_ratio = std::min(min_ratio, scan.min_curvature / prev);
      prev = scan.min_curvature;
    }
  }
  o.detail << "junction failures " << junction_fail << ", cone-branch rel error " << worst_branch
           << ", min halving ratio " << min_ratio << ", min relative bound slack " << min_slack;
  o.require(junction_fail == 0, "junction");
  o.require(worst_branch <= 1e-10, "cone branch curvature");
  o.require(min_ratio >= 1.8, "halving ratio");
  o.require(min_slack >= -1e-12, "lower bound");
}

void field_suite(Outcome& o) {
  const double beta = pi / 3;
  const double delta = select_delta(beta);
  const double bound = c_beta(beta - delta);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> rad(0.2, 3.0), psi(0.0, beta), phi(0.0, 2 * pi);
  std::vector<Vec3> pts;
  for (int i = 0; i < 100; ++i) {
    const double a = psi(rng), b = phi(rng), s = rad(rng);
    pts.push_back(s * Vec3(std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a)));
  }
  const CurvatureField families[] = {CurvatureField::zero(), CurvatureField::constant(0.3),
                                     CurvatureField::radial(0.15), CurvatureField::power(0.1, 0.5),
                                     CurvatureField::modulated(0.1, 0.05)};
  double worst_div = 0.0;
  for (const CurvatureField& f : families) {
    for (const Vec3& p : pts) {
      const double h = 1e-4 * p.norm();
      double div = 0.0;
      for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = h;
        div += (build_potential_Q(f, p + e)[k] - build_potential_Q(f, p - e)[k]) / (2 * h);
      }
      const double ref = std::max(std::abs(f.eval(p)), 1e-300);
      worst_div = std::max(worst_div, f.eval(p) == 0.0 ? std::abs(div) : std::abs(div - f.eval(p)) / ref);
    }
  }
  // fields with |H(p)||p| <= c_{beta-delta}
  double sup_q = 0.0;
  const CurvatureField bounded[] = {CurvatureField::radial(bound), CurvatureField::modulated(0.6 * bound, 0.4 * bound),
                                    CurvatureField::radial(0.9 * c_beta(beta))};
  for (const CurvatureField& f : bounded) {
    for (const Vec3& p : pts) sup_q = std::max(sup_q, build_potential_Q(f, p).norm());
  }
  const double mono = check_monotonicity(CurvatureField::radial(0.15), pts);
  o.detail << "worst div Q residual " << worst_div << ", sup|Q| " << sup_q << " (bound " << bound / 2
           << "), radial monotonicity " << mono;
  o.require(worst_div <= 1e-6, "div Q");
  o.require(sup_q <= bound / 2 * (1 + 1e-12), "sup |Q|");
  o.require(std::abs(mono) <= 1e-12, "monotonicity");
}

void beta_convexity(Outcome& o) {
  int disagree_oracle = 0, disagree_analytic = 0, not_convex = 0, beta_convex = 0;
  for (int i = 0; i < 10; ++i) {
    const double alpha = 0.1 + 0.13 * i;
    const SphericalBoundary cap = SphericalBoundary::cap(alpha);
    const auto dense = oracle::domain_points(cap, 24, 72);
    for (int j = 0; j < 10; ++j) {
      const double beta = 0.165 + 0.13 * j;
      const bool got = is_beta_convex(cap, beta).beta_convex;
      if (got != oracle::beta_cone_condition(cap, beta, 4, 360, dense, 0.01)) ++disagree_oracle;
      if (got != (alpha <= beta)) ++disagree_analytic;
      if (got) {
        ++beta_convex;
        if (!is_convex(cap, 256)) ++not_convex;
      }
    }
  }
  o.detail << "100 cells, " << beta_convex << " beta-convex; disagreements oracle " << disagree_oracle
           << ", analytic " << disagree_analytic << "; beta-convex but not convex " << not_convex;
  o.require(disagree_oracle == 0, "sampling oracle");
  o.require(disagree_analytic == 0, "alpha_c <= beta");
  o.require(not_convex == 0, "convexity");
}

void stability(Outcome& o) {
  const double target = 5.7832;
  const DiskMesh m = build_disk_mesh(16, 64);
  const double mu0 = stability_eigenvalue(m, std::vector<double>(m.num_vertices(), 0.0)).mu1;
  double worst_shift = 0.0;
  for (double c : {-1.0, 0.5, 1.5}) {
    const double mu = stability_eigenvalue(m, std::vector<double>(m.num_vertices(), c)).mu1;
    worst_shift = std::max(worst_shift, std::abs(mu - (mu0 - 2 * c)) / std::abs(mu0 - 2 * c));
  }
  const double rel = std::abs(mu0 - target) / target;
  o.detail << "mu1(0) " << mu0 << " (rel " << rel << "), worst shift rel error " << worst_shift;
  o.require(rel <= 0.02, "Dirichlet eigenvalue");
  o.require(worst_shift <= 0.02, "shift");
}

void end_to_end(Outcome& o) {
  const double beta = pi / 3;
  const CurvatureField field = CurvatureField::radial(0.9 * c_beta(beta));
  const SphericalBoundary dom = SphericalBoundary::perturbed_cap(0.8 * beta, {0.0, 0.03}, {});
  const RadialGraphCurve curve = build_curve(dom, FourierSeries{1.0, {0.1}, {}}, beta);
  SolveConfig cfg;
  double normal_res[2], radial_res[2];
  int k = 0;
  for (int nt : {32, 64}) {
    const SurfaceState s0 = solve(mesh_ptr(nt), curve, field, cfg);
    const SurfaceState s = reparametrize_boundary(s0, curve, field, cfg, 40).state;
    const VerificationReport rep = verify(s, curve, field, beta, VerifyConfig{});
    normal_res[k] = rep.find("normal_equation_residual")->value;
    radial_res[k] = rep.find("radial_normal_residual")->value;
    ++k;
    if (nt != 64) continue;

    const EnclosureMargins enc = check_enclosure(s, field, beta);
    const NormalField n = gauss_map(s);
    const DensityField d = density_field(s, field, n);
    const RadialNormalMargins rn = check_radial_normal(s, field, d, n);
    const double mu1 = stability_eigenvalue(s, d).mu1;
    const int degree = projection_degree(s, 32);
    o.detail << "min interior phi " << enc.min_interior_phi << ", min N.X " << rn.min_closure << ", mu1 "
             << mu1 << " (median E " << n.median_E << "), degree " << degree << ", grid "
             << rep.graph.points.size() << ", branch points " << rep.branch_triangles.size()
             << ", report " << (rep.pass() ? "pass" : "fail");
    o.require(enc.min_interior_phi > 0.0, "enclosure");
    o.require(rn.min_closure > 0.0, "N.X");
    o.require(mu1 >= -1e-3 * n.median_E, "stability");
    o.require(degree == 1, "degree");
    o.require(rep.injective && rep.graph.points.size() == 512, "radial graph");
    o.require(rep.branch_triangles.empty(), "branch points");
    o.require(rep.pass(), "verification report");
  }
  const double order_n = std::log2(normal_res[0] / normal_res[1]);
  const double order_r = std::log2(radial_res[0] / radial_res[1]);
  o.detail << "; normal-equation residual " << normal_res[0] << " -> " << normal_res[1] << " (order "
           << order_n << "), radial-normal residual " << radial_res[0] << " -> " << radial_res[1]
           << " (order " << order_r << ")";
  o.require(order_n >= 0.8, "normal equation O(h)");
  o.require(order_r >= 0.8, "radial normal O(h)");
}

void designed_failures(Outcome& o) {
  const double beta = pi / 3;
  const CurvatureField field = CurvatureField::radial(0.9 * c_beta(beta));
  const SphericalBoundary dom = SphericalBoundary::perturbed_cap(0.8 * beta, {0.0, 0.03}, {});
  const RadialGraphCurve rev = build_curve(dom.reversed(), FourierSeries{1.0, {0.1}, {}}, beta);
  const SurfaceState s = solve(mesh_ptr(32), rev, field, SolveConfig{});
  const VerificationReport rep = verify(s, rev, field, beta, VerifyConfig{});
  o.detail << "reversed: degree " << rep.degree << ", report " << (rep.pass() ? "pass" : "fail");
  o.require(rep.degree == -1 && !rep.pass(), "reversed boundary");

  RunConfig cfg;
  cfg.cone.beta = 0.8;
  cfg.boundary.domain = SphericalBoundary::cap(0.9);
  cfg.mesh = {8, 32};
  cfg.output.dir = std::filesystem::temp_directory_path();
  bool thrown = false;
  try {
    run_solve(cfg);
  } catch (const NotBetaConvexAt& e) {
    thrown = true;
    o.detail << "; wide cap: NotBetaConvexAt(theta=" << e.theta() << ")";
  }
  o.require(thrown, "NotBetaConvexAt");

  auto mesh = mesh_ptr(32);
  SurfaceState st;
  st.mesh = mesh;
  for (const Vec2& p : mesh->uv) st.X.emplace_back(2 * p.x(), p.y(), 2.0);
  const double defect = conformality_defect(st);
  o.detail << "; stretched defect " << defect;
  o.require(std::abs(defect - 0.75) <= 1e-14, "stretched defect");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;  // seconds
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {"flat disk oracle", 5, flat_disk},
      {"spherical cap oracle", 30, spherical_cap},
      {"smoothed cone suite", 2, smoothed_cone},
      {"field suite", 2, field_suite},
      {"beta-convexity oracle", 10, beta_convexity},
      {"stability oracle", 20, stability},
      {"end-to-end invariants", 60, end_to_end},
      {"designed failures", 10, designed_failures},
  };
  int failures = 0;
  int index = 1;
  for (const Criterion& c : criteria) {
    Outcome o;
    o.detail.precision(4);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget) {
      o.pass = false;
      o.detail << " [over time budget]";
    }
    std::printf("%s %d %s: %s; %.2f s (budget %.0f s)\n", o.pass ? "PASS" : "FAIL", index++, c.name,
                o.detail.str().c_str(), secs, c.budget);
    failures += !o.pass;
  }
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
