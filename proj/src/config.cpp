#include "hcone/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>

namespace hcone {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ConfigInvalid(where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) invalid(where, "expected an object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) invalid(where, "unknown key '" + k + "'");
  }
}

template <class T>
T get(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) invalid(where, std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(where + "." + key, "wrong type");
  }
}

template <class T>
void get_to(const json& j, const std::string& where, const char* key, T& out) {
  if (j.contains(key)) out = get<T>(j, where, key);
}

void check(bool ok, const std::string& where, const std::string& what) {
  if (!ok) invalid(where, what);
}

FourierSeries parse_series(const json& j, const std::string& where) {
  only_keys(j, where, {"a0", "a", "b"});
  FourierSeries s;
  s.a0 = get<double>(j, where, "a0");
  get_to(j, where, "a", s.a);
  get_to(j, where, "b", s.b);
  return s;
}

BoundaryBlock parse_boundary(const json& j) {
  const std::string w = "boundary";
  only_keys(j, w, {"type", "alpha_c", "a", "b", "radius", "height", "g", "reversed"});
  const auto type = get<std::string>(j, w, "type");
  BoundaryBlock out;
  bool have_g = false;
  try {
    if (type == "cap") {
      out.domain = SphericalBoundary::cap(get<double>(j, w, "alpha_c"));
    } else if (type == "perturbed_cap") {
      std::vector<double> a, b;
      get_to(j, w, "a", a);
      get_to(j, w, "b", b);
      out.domain = SphericalBoundary::perturbed_cap(get<double>(j, w, "alpha_c"), a, b);
    } else if (type == "circle") {
      // horizontal circle of the given radius centred on the axis at the given height
      const double r = get<double>(j, w, "radius");
      const double h = get<double>(j, w, "height");
      check(r > 0.0 && h > 0.0, w, "circle needs positive radius and height");
      out.domain = SphericalBoundary::cap(std::atan2(r, h));
      out.g = FourierSeries::constant(std::hypot(r, h));
      have_g = true;
    } else {
      invalid(w + ".type", "expected cap, perturbed_cap or circle");
    }
  } catch (const OutOfRange& e) {
    invalid(w, e.what());
  }
  if (j.contains("g")) {
    check(!have_g, w + ".g", "a circle boundary fixes g");
    out.g = parse_series(j.at("g"), w + ".g");
  }
  bool reversed = false;
  get_to(j, w, "reversed", reversed);
  if (reversed) out.domain = out.domain.reversed();
  return out;
}

SolveConfig parse_solver(const json& j) {
  const std::string w = "solver";
  only_keys(j, w, {"max_iters", "relaxation", "residual_tol", "update_tol", "continuation_steps",
                   "reparam_enabled", "reparam_sweeps"});
  SolveConfig c;
  get_to(j, w, "max_iters", c.max_iters);
  get_to(j, w, "relaxation", c.relaxation);
  get_to(j, w, "residual_tol", c.residual_tol);
  get_to(j, w, "update_tol", c.update_tol);
  get_to(j, w, "continuation_steps", c.continuation_steps);
  get_to(j, w, "reparam_enabled", c.reparam_enabled);
  get_to(j, w, "reparam_sweeps", c.reparam_sweeps);
  return c;
}

VerifyConfig parse_verify(const json& j) {
  const std::string w = "verify";
  only_keys(j, w, {"tau_b", "n_axes", "n_probe", "grid_points", "grid_shrink", "stability_tol_rel",
                   "defect_tol", "jacobian_tol", "residual_tol", "n_boundary", "n_domain"});
  VerifyConfig c;
  get_to(j, w, "tau_b", c.tau_b);
  get_to(j, w, "n_axes", c.n_axes);
  get_to(j, w, "n_probe", c.n_probe);
  get_to(j, w, "grid_points", c.grid_points);
  get_to(j, w, "grid_shrink", c.grid_shrink);
  get_to(j, w, "stability_tol_rel", c.stability_tol_rel);
  get_to(j, w, "defect_tol", c.defect_tol);
  get_to(j, w, "jacobian_tol", c.jacobian_tol);
  get_to(j, w, "residual_tol", c.residual_tol);
  get_to(j, w, "n_boundary", c.n_boundary);
  get_to(j, w, "n_domain", c.n_domain);
  return c;
}

}  // namespace

CurvatureField parse_field(const json& j, double beta) {
  const std::string w = "field";
  only_keys(j, w, {"family", "h0", "c", "c_fraction", "s", "a", "radii", "colatitudes", "values"});
  const auto family = get<std::string>(j, w, "family");
  // radial-type families accept c directly or as a fraction of c_beta
  auto coefficient = [&]() {
    check(j.contains("c") != j.contains("c_fraction"), w, "give exactly one of c, c_fraction");
    return j.contains("c") ? get<double>(j, w, "c") : get<double>(j, w, "c_fraction") * c_beta(beta);
  };
  try {
    if (family == "zero") return CurvatureField::zero();
    if (family == "constant") return CurvatureField::constant(get<double>(j, w, "h0"));
    if (family == "radial") return CurvatureField::radial(coefficient());
    if (family == "power") return CurvatureField::power(coefficient(), get<double>(j, w, "s"));
    if (family == "modulated") return CurvatureField::modulated(coefficient(), get<double>(j, w, "a"));
    if (family == "tabulated") {
      FieldTable t;
      t.radii = get<std::vector<double>>(j, w, "radii");
      t.colatitudes = get<std::vector<double>>(j, w, "colatitudes");
      t.values = get<std::vector<double>>(j, w, "values");
      return CurvatureField::tabulated(std::move(t));
    }
  } catch (const OutOfRange& e) {
    invalid(w, e.what());
  }
  invalid(w + ".family", "unknown family '" + family + "'");
}

void RunConfig::validate() const {
  check(cone.beta > 0.0 && cone.beta < std::numbers::pi / 2, "cone.beta", "must lie in (0, pi/2)");
  if (cone.delta) {
    check(*cone.delta > 0.0 && cone.beta - *cone.delta > 0.0 &&
              cone.beta + *cone.delta < std::numbers::pi / 2,
          "cone.delta", "beta - delta and beta + delta must lie in (0, pi/2)");
  }
  check(cone.grid_step > 0.0, "cone.grid_step", "must be positive");
  check(!cone.eps.empty(), "cone.eps", "must not be empty");
  for (double e : cone.eps) check(e > 0.0, "cone.eps", "entries must be positive");
  check(cone.samples >= 64, "cone.samples", "must be at least 64");
  check(mesh.n_r >= 4 && mesh.n_theta >= 8, "mesh", "need n_r >= 4 and n_theta >= 8");
  try {
    solver.validate();
  } catch (const OutOfRange& e) {
    invalid("solver", e.what());
  }
  try {
    verify.validate();
  } catch (const OutOfRange& e) {
    invalid("verify", e.what());
  }
}

RunConfig parse_config(const json& j) {
  only_keys(j, "config", {"cone", "field", "boundary", "mesh", "solver", "verify", "output"});
  RunConfig c;

  if (!j.contains("cone")) invalid("config", "missing 'cone' block");
  const json& cone = j.at("cone");
  only_keys(cone, "cone", {"beta", "delta", "grid_step", "eps", "samples"});
  c.cone.beta = get<double>(cone, "cone", "beta");
  if (cone.contains("delta") && !cone.at("delta").is_null()) c.cone.delta = get<double>(cone, "cone", "delta");
  get_to(cone, "cone", "grid_step", c.cone.grid_step);
  get_to(cone, "cone", "eps", c.cone.eps);
  get_to(cone, "cone", "samples", c.cone.samples);
  check(c.cone.beta > 0.0 && c.cone.beta < std::numbers::pi / 2, "cone.beta", "must lie in (0, pi/2)");

  if (j.contains("field")) c.field = parse_field(j.at("field"), c.cone.beta);
  if (j.contains("boundary")) c.boundary = parse_boundary(j.at("boundary"));

  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    only_keys(m, "mesh", {"n_r", "n_theta"});
    get_to(m, "mesh", "n_theta", c.mesh.n_theta);
    c.mesh.n_r = std::max(4, c.mesh.n_theta / 4);
    get_to(m, "mesh", "n_r", c.mesh.n_r);
  }
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
  if (j.contains("verify")) c.verify = parse_verify(j.at("verify"));
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"dir", "obj", "json", "csv"});
    if (o.contains("dir")) c.output.dir = get<std::string>(o, "output", "dir");
    get_to(o, "output", "obj", c.output.obj);
    get_to(o, "output", "json", c.output.json);
    get_to(o, "output", "csv", c.output.csv);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace hcone
