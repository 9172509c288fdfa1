#include "hcone/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "hcone/cone_smoothing.hpp"

namespace hcone {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchema = 1;

fs::path output_path(const RunConfig& config, const char* name) {
  const fs::path& dir = config.output.dir;
  if (!fs::is_directory(dir)) throw IoError("output directory does not exist: " + dir.string());
  return dir / name;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void write_json(const json& j, const fs::path& path, std::vector<fs::path>& artifacts) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
  artifacts.push_back(path);
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json run_header(const RunConfig& config, const char* kind) {
  return {{"schema", kSchema},
          {"kind", kind},
          {"beta", config.cone.beta},
          {"field", config.field.describe()},
          {"mesh", {{"n_r", config.mesh.n_r}, {"n_theta", config.mesh.n_theta}}}};
}

void require_beta_convex(const RunConfig& config) {
  const BetaConvexityReport bc = is_beta_convex(config.boundary.domain, config.cone.beta,
                                                config.verify.n_boundary, config.verify.n_domain);
  if (!bc.beta_convex) throw NotBetaConvexAt(bc.first_failure_theta.value_or(0.0));
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigInvalid*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const CurveLeavesCone*>(&e)) {
    return kExitConfig;
  }
  if (dynamic_cast<const NotBetaConvexAt*>(&e)) return kExitVerification;
  return kExitSolver;
}

RadialGraphCurve make_curve(const RunConfig& config) {
  try {
    return build_curve(config.boundary.domain, config.boundary.g, config.cone.beta);
  } catch (const OutOfRange& e) {
    throw ConfigInvalid(std::string("boundary.g: ") + e.what());
  }
}

SurfaceState solve_configured(const RunConfig& config, std::vector<ReparamSweep>* sweeps) {
  const RadialGraphCurve curve = make_curve(config);
  auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(config.mesh.n_r, config.mesh.n_theta));
  SurfaceState state = solve(mesh, curve, config.field, config.solver);
  if (config.solver.reparam_enabled && config.solver.reparam_sweeps > 0) {
    ReparamResult r = reparametrize_boundary(state, curve, config.field, config.solver,
                                             config.solver.reparam_sweeps);
    if (sweeps) *sweeps = r.sweeps;
    state = std::move(r.state);
  }
  return state;
}

json surface_to_json(const SurfaceState& s) {
  json X = json::array();
  for (const Vec3& x : s.X) X.push_back(vec_json(x));
  return {{"schema", kSchema},
          {"kind", "surface"},
          {"n_r", s.mesh->n_r},
          {"n_theta", s.mesh->n_theta},
          {"theta", s.theta},
          {"pinned", s.pinned},
          {"converged", s.converged},
          {"iterations", s.iterations},
          {"residual", s.residual},
          {"last_update", s.last_update},
          {"scale", s.scale},
          {"X", std::move(X)}};
}

SurfaceState surface_from_json(const json& j) {
  try {
    if (j.at("schema").get<int>() != kSchema || j.at("kind").get<std::string>() != "surface") {
      throw ConfigInvalid("surface artifact has an unsupported schema or kind");
    }
    SurfaceState s;
    s.mesh = std::make_shared<const DiskMesh>(
        build_disk_mesh(j.at("n_r").get<int>(), j.at("n_theta").get<int>()));
    s.theta = j.at("theta").get<std::vector<double>>();
    s.pinned = j.at("pinned").get<std::array<int, 3>>();
    s.converged = j.at("converged").get<bool>();
    s.iterations = j.at("iterations").get<int>();
    s.residual = j.at("residual").get<double>();
    s.last_update = j.at("last_update").get<double>();
    s.scale = j.at("scale").get<double>();
    for (const auto& x : j.at("X")) {
      const auto v = x.get<std::array<double, 3>>();
      s.X.emplace_back(v[0], v[1], v[2]);
    }
    const int nb = static_cast<int>(s.mesh->boundary.size());
    if (static_cast<int>(s.X.size()) != s.mesh->num_vertices() ||
        static_cast<int>(s.theta.size()) != nb) {
      throw ConfigInvalid("surface artifact sizes do not match its mesh");
    }
    for (int p : s.pinned) {
      if (p < 0 || p >= nb) throw ConfigInvalid("surface artifact has invalid pinned indices");
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("surface artifact: ") + e.what());
  } catch (const OutOfRange& e) {
    throw ConfigInvalid(std::string("surface artifact: ") + e.what());
  }
}

json report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"units", c.units},
                      {"note", c.note}});
  }
  return {{"pass", r.pass()},
          {"degree", r.degree},
          {"injective", r.injective},
          {"branch_triangles", r.branch_triangles.size()},
          {"mu1", r.mu1},
          {"checks", std::move(checks)}};
}

void write_obj(const SurfaceState& state, const fs::path& path) {
  auto out = open_out(path);
  out << "# " << state.mesh->num_vertices() << " vertices, " << state.mesh->num_triangles()
      << " faces\n";
  for (const Vec3& x : state.X) out << "v " << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  for (const auto& t : state.mesh->triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

RunResult run_solve(const RunConfig& config) {
  RunResult result;
  // fail on the output directory before doing any work
  const fs::path obj_path = output_path(config, "surface.obj");
  require_beta_convex(config);
  std::vector<ReparamSweep> sweeps;
  const SurfaceState state = solve_configured(config, &sweeps);

  json log = json::array();
  for (const IterationRecord& r : state.log) {
    log.push_back({{"step", r.step},
                   {"iteration", r.iteration},
                   {"field_scale", r.field_scale},
                   {"update", r.update},
                   {"residual", r.residual}});
  }
  json reparam = json::array();
  for (const ReparamSweep& s : sweeps) {
    reparam.push_back({{"energy", s.energy},
                       {"integrated_defect", s.integrated_defect},
                       {"max_defect", s.max_defect},
                       {"step", s.step}});
  }
  json& rep = result.report = run_header(config, "solve");
  rep["converged"] = state.converged;
  rep["iterations"] = state.iterations;
  rep["residual"] = state.residual;
  rep["last_update"] = state.last_update;
  rep["energy_F"] = energy_F(state, config.field);
  rep["energy_G"] = energy_G(state, config.field);
  rep["conformality_defect"] = conformality_defect(state);
  rep["integrated_defect"] = integrated_defect(state);
  rep["reparametrization"] = std::move(reparam);
  rep["log"] = std::move(log);

  if (config.output.obj) {
    write_obj(state, obj_path);
    result.artifacts.push_back(obj_path);
  }
  write_json(surface_to_json(state), output_path(config, "surface.json"), result.artifacts);
  if (config.output.json) write_json(rep, output_path(config, "solve.json"), result.artifacts);
  return result;
}

RunResult run_verify(const RunConfig& config, const std::optional<fs::path>& surface) {
  RunResult result;
  const fs::path report_path = output_path(config, "verify.json");
  json& rep = result.report = run_header(config, "verify");

  SurfaceState state;
  if (surface) {
    std::ifstream in(*surface);
    if (!in) throw IoError("cannot read surface " + surface->string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigInvalid(surface->string() + ": " + e.what());
    }
    state = surface_from_json(j);
  } else {
    const BetaConvexityReport bc = is_beta_convex(config.boundary.domain, config.cone.beta,
                                                  config.verify.n_boundary, config.verify.n_domain);
    if (!bc.beta_convex) {
      // report the failed precondition instead of solving
      VerificationReport vr;
      vr.checks.push_back({"beta_convex", bc.margin, bc.tolerance, false, "1",
                           "first failure at theta=" + std::to_string(*bc.first_failure_theta)});
      vr.checks.push_back({"solve", 0.0, 0.0, false, "1", "skipped: domain is not beta-convex"});
      rep.update(report_to_json(vr));
      if (config.output.json) write_json(rep, report_path, result.artifacts);
      result.exit_code = kExitVerification;
      return result;
    }
    state = solve_configured(config);
  }
  const RadialGraphCurve curve = make_curve(config);

  const VerificationReport vr = verify(state, curve, config.field, config.cone.beta, config.verify);
  rep.update(report_to_json(vr));
  if (config.output.json) write_json(rep, report_path, result.artifacts);
  if (config.output.csv) {
    const fs::path csv_path = output_path(config, "radial_graph.csv");
    auto out = open_out(csv_path);
    out << "theta_grid,phi_grid,lambda\n";
    for (std::size_t i = 0; i < vr.graph.points.size(); ++i) {
      const Vec3& p = vr.graph.points[i].vec();
      const double azimuth = std::atan2(p.y(), p.x());
      const double colatitude = std::acos(std::clamp(p.z(), -1.0, 1.0));
      out << azimuth << ',' << colatitude << ',' << vr.graph.lambda[i] << '\n';
    }
    result.artifacts.push_back(csv_path);
  }
  result.exit_code = vr.pass() ? kExitPass : kExitVerification;
  return result;
}

RunResult run_check_domain(const RunConfig& config) {
  RunResult result;
  const fs::path report_path = output_path(config, "domain.json");
  const SphericalBoundary& domain = config.boundary.domain;
  const VerifyConfig& v = config.verify;
  const BetaConvexityReport bc = is_beta_convex(domain, config.cone.beta, v.n_boundary, v.n_domain);
  const ConvexityReport cx = convexity(domain, v.n_boundary, v.n_domain);

  json& rep = result.report = run_header(config, "check-domain");
  rep.erase("field");
  rep.erase("mesh");
  rep["beta_convex"] = {{"value", bc.beta_convex},
                        {"margin", bc.margin},
                        {"tolerance", bc.tolerance},
                        {"n_boundary", bc.n_boundary},
                        {"n_domain", bc.n_domain},
                        {"first_failure_theta", bc.first_failure_theta
                                                    ? json(*bc.first_failure_theta)
                                                    : json(nullptr)}};
  rep["convex"] = {{"value", cx.convex}, {"worst_violation", cx.worst_violation}};
  bool pass = bc.beta_convex;
  if (bc.beta_convex) {
    try {
      const int sign = orientation_sign(domain, config.cone.beta, v.n_boundary, v.n_domain);
      rep["orientation"] = {{"sign", sign}, {"positive", sign < 0}};
      pass = pass && sign < 0;
    } catch (const SignChange& e) {
      rep["orientation"] = {{"sign", 0}, {"positive", false}, {"note", e.what()}};
      pass = false;
    }
  } else {
    rep["orientation"] = {{"sign", 0}, {"positive", false}, {"note", "skipped: domain is not beta-convex"}};
  }
  rep["pass"] = pass;
  write_json(rep, report_path, result.artifacts);
  result.exit_code = pass ? kExitPass : kExitVerification;
  return result;
}

RunResult run_profile_cone(const RunConfig& config) {
  RunResult result;
  const fs::path report_path = output_path(config, "profile.json");
  const double beta = config.cone.beta;
  double delta = 0.0;
  try {
    delta = config.cone.delta ? *config.cone.delta : select_delta(beta, config.cone.grid_step);
  } catch (const OutOfRange& e) {
    throw ConfigInvalid(std::string("cone: ") + e.what());
  }
  const int n = config.cone.samples;

  json& rep = result.report = run_header(config, "profile-cone");
  rep.erase("mesh");
  rep["delta"] = delta;
  rep["c_beta_minus_delta"] = c_beta(beta - delta);
  rep["half_cot_beta_plus_delta"] = 0.5 / std::tan(beta + delta);
  rep["profiles"] = json::array();

  std::ofstream csv;
  fs::path csv_path;
  if (config.output.csv) {
    csv_path = output_path(config, "profile.csv");
    csv = open_out(csv_path);
    csv << "eps,t,alpha1,alpha2,H_S\n";
  }
  bool pass = true;
  double prev_min = 0.0;
  for (std::size_t k = 0; k < config.cone.eps.size(); ++k) {
    const double eps = config.cone.eps[k];
    const SmoothedConeProfile p = make_profile(beta, delta, eps);
    const JunctionJumps jj = junction_jumps(p);
    const CapCurvatureScan scan = scan_cap_curvature(p, n);
    const EnclosureCurvatureReport enc = check_enclosure_curvature(p, config.field, n);
    const double junction_h = 0.5 / (std::tan(p.angle()) * p.t_eps);
    const bool ok = jj.within_tolerance(eps) && scan.min_bound_slack >= -1e-12 &&
                    scan.min_curvature >= junction_h * (1.0 - 1e-12) && enc.pass();
    pass = pass && ok;
    json entry = {{"eps", eps},
                  {"t_eps", p.t_eps},
                  {"coefficients", {{"a", p.a_eps}, {"b", p.b_eps}, {"c", p.c_eps}}},
                  {"junction", {{"value", jj.value}, {"slope", jj.slope}, {"curvature", jj.curvature},
                                {"within_tolerance", jj.within_tolerance(eps)}}},
                  {"min_cap_curvature", scan.min_curvature},
                  {"argmin_t", scan.argmin_t},
                  {"junction_curvature", junction_h},
                  {"bound_slack", scan.min_bound_slack},
                  {"enclosure", {{"cap_margin", enc.cap_margin},
                                 {"cone_margin", enc.cone_margin},
                                 {"cone_scaled_margin", enc.cone_scaled_margin},
                                 {"t_max", enc.t_max},
                                 {"pass", enc.pass()}}},
                  {"pass", ok}};
    if (k > 0) entry["min_curvature_ratio"] = scan.min_curvature / prev_min;
    prev_min = scan.min_curvature;
    rep["profiles"].push_back(std::move(entry));

    if (csv.is_open()) {
      const double t_max = 3.0 * p.t_eps;
      for (int i = 0; i < 2 * n; ++i) {
        const double t = t_max * i / (2 * n - 1);
        csv << eps << ',' << t << ',' << p.alpha1(t) << ',' << p.alpha2(t) << ','
            << profile_mean_curvature(p, t) << '\n';
      }
    }
  }
  if (csv.is_open()) {
    if (!csv) throw IoError("failed writing " + csv_path.string());
    result.artifacts.push_back(csv_path);
  }
  rep["pass"] = pass;
  if (config.output.json) write_json(rep, report_path, result.artifacts);
  result.exit_code = pass ? kExitPass : kExitVerification;
  return result;
}

}  // namespace hcone
