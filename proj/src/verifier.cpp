#include "hcone/verifier.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hcone {

namespace {

using Jet3 = std::array<Vec3, 6>;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

std::vector<Jet3> surface_jets(const JetFitter& fitter, const std::vector<Vec3>& X) {
  std::vector<Jet3> jets(X.size());
  for (std::size_t v = 0; v < X.size(); ++v) jets[v] = fitter.jet(static_cast<int>(v), X);
  return jets;
}

std::vector<double> lumped_mass(const DiskMesh& mesh) {
  std::vector<double> m(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k : mesh.triangles[t]) m[k] += mesh.area[t] / 3.0;
  }
  return m;
}

// Accumulates a residual over interior vertices whose stencil is fully defined.
class ResidualAccumulator {
 public:
  explicit ResidualAccumulator(const DiskMesh& mesh) : mass_(lumped_mass(mesh)) {}
  void add(int v, double residual, double reference) {
    sum_ += mass_[v] * residual * residual;
    ref_ += mass_[v] * reference * reference;
    weight_ += mass_[v];
    max_ = std::max(max_, residual);
  }
  ResidualNorm result() const {
    if (weight_ == 0.0) return {};
    return {std::sqrt(sum_ / weight_), max_, std::sqrt(ref_ / weight_)};
  }

 private:
  std::vector<double> mass_;
  double sum_ = 0.0, ref_ = 0.0, weight_ = 0.0, max_ = 0.0;
};

// Vertices where the PDE identities are evaluated: off the boundary ring and
// away from the mesh pole.
bool regular_interior(const DiskMesh& m, const JetFitter& fitter, int v) {
  return !m.on_boundary[v] && !fitter.touches_pole(v);
}

bool stencil_defined(const JetFitter& fitter, int v, const std::vector<char>& defined) {
  for (int k : fitter.stencil(v)) {
    if (!defined[k]) return false;
  }
  return true;
}

}  // namespace

NormalField gauss_map(const SurfaceState& state, double tau_b) {
  const DiskMesh& m = *state.mesh;
  NormalField n;
  n.tau_b = tau_b;
  std::vector<double> et(m.num_triangles());
  std::vector<Vec3> cross(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    et[t] = xu.squaredNorm();
    cross[t] = xu.cross(xv);
  }
  n.median_E = median(et);
  n.triangle.assign(m.num_triangles(), Vec3::Zero());
  n.triangle_defined.assign(m.num_triangles(), 0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    if (et[t] > tau_b * n.median_E && cross[t].norm() > kDegenerateNorm) {
      n.triangle[t] = cross[t].normalized();
      n.triangle_defined[t] = 1;
    } else {
      n.branch_triangles.push_back(t);
    }
  }

  const JetFitter fitter(m);
  const auto jets = surface_jets(fitter, state.X);
  std::vector<double> ev(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) {
    ev[v] = 0.5 * (jets[v][1].squaredNorm() + jets[v][2].squaredNorm());
  }
  const double med_v = median(ev);
  n.vertex.assign(m.num_vertices(), Vec3::Zero());
  n.vertex_defined.assign(m.num_vertices(), 0);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const Vec3 c = jets[v][1].cross(jets[v][2]);
    if (ev[v] > tau_b * med_v && c.norm() > kDegenerateNorm) {
      n.vertex[v] = c.normalized();
      n.vertex_defined[v] = 1;
    }
  }
  return n;
}

DensityField density_field(const SurfaceState& state, const CurvatureField& field,
                           const NormalField& normals) {
  const DiskMesh& m = *state.mesh;
  const JetFitter fitter(m);
  const auto jets = surface_jets(fitter, state.X);
  const int nv = m.num_vertices();
  DensityField d;
  d.p.assign(nv, 0.0);
  d.E.assign(nv, 0.0);
  d.K.assign(nv, 0.0);
  d.gradH_dot_N.assign(nv, 0.0);
  d.defined = normals.vertex_defined;
  for (int v = 0; v < nv; ++v) {
    const Jet3& j = jets[v];
    const double e1 = j[1].squaredNorm(), f1 = j[1].dot(j[2]), g1 = j[2].squaredNorm();
    d.E[v] = 0.5 * (e1 + g1);
    if (!d.defined[v]) continue;
    const Vec3& N = normals.vertex[v];
    const double e = j[3].dot(N), f = j[4].dot(N), g = j[5].dot(N);
    d.K[v] = (e * g - f * f) / (e1 * g1 - f1 * f1);
    const double H = field.eval(state.X[v]);
    d.gradH_dot_N[v] = field.grad(state.X[v]).dot(N);
    d.p[v] = d.E[v] * (2.0 * H * H - d.K[v] - d.gradH_dot_N[v]);
  }
  return d;
}

StabilityResult stability_eigenvalue(const DiskMesh& mesh, const std::vector<double>& p,
                                     double tol, int max_iter) {
  const int nv = mesh.num_vertices();
  if (static_cast<int>(p.size()) != nv) throw OutOfRange("density must have one value per vertex");
  std::vector<int> slot(nv, -1);
  int ni = 0;
  for (int v = 0; v < nv; ++v) {
    if (!mesh.on_boundary[v]) slot[v] = ni++;
  }
  double pmax = 0.0;
  for (double x : p) pmax = std::max(pmax, std::abs(x));

  // Exact integrals of products of barycentric coordinates:
  // int l_a l_b = A/6 (a = b) or A/12, int l_a l_b l_c = A/10, A/30 or A/60.
  std::vector<Eigen::Triplet<double>> ta, tm;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& g = mesh.basis_grad[t];
    const double A = mesh.area[t];
    for (int a = 0; a < 3; ++a) {
      const int i = slot[tri[a]];
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int j = slot[tri[b]];
        if (j < 0) continue;
        const double mab = a == b ? A / 6.0 : A / 12.0;
        double mp = 0.0;
        for (int c = 0; c < 3; ++c) {
          const int distinct = 1 + (b != a) + (c != a && c != b);
          mp += p[tri[c]] * (distinct == 1 ? A / 10.0 : distinct == 2 ? A / 30.0 : A / 60.0);
        }
        ta.emplace_back(i, j, A * g[a].dot(g[b]) - 2.0 * mp);
        tm.emplace_back(i, j, mab);
      }
    }
  }
  Eigen::SparseMatrix<double> A(ni, ni), M(ni, ni);
  A.setFromTriplets(ta.begin(), ta.end());
  M.setFromTriplets(tm.begin(), tm.end());

  StabilityResult r;
  r.shift = -2.0 * pmax - 1.0;
  const Eigen::SparseMatrix<double> B = A - r.shift * M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(B);
  if (ldlt.info() != Eigen::Success) throw EigensolverFailure("shifted stability operator is singular");

  Eigen::VectorXd x = Eigen::VectorXd::Ones(ni);
  x /= std::sqrt(x.dot(M * x));
  double mu = x.dot(A * x);
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = ldlt.solve(M * x);
    const double norm = std::sqrt(y.dot(M * y));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw EigensolverFailure("inverse iteration broke down");
    x = y / norm;
    const double next = x.dot(A * x);
    r.iterations = it;
    if (std::abs(next - mu) <= tol * std::max(1.0, std::abs(next))) {
      r.mu1 = next;
      return r;
    }
    mu = next;
  }
  throw EigensolverFailure("inverse iteration did not converge in " + std::to_string(max_iter) +
                           " iterations");
}

StabilityResult stability_eigenvalue(const SurfaceState& state, const DensityField& density) {
  return stability_eigenvalue(*state.mesh, density.p);
}

ResidualNorm normal_equation_residual(const SurfaceState& state, const CurvatureField& field,
                                      const NormalField& normals, const DensityField& density) {
  const DiskMesh& m = *state.mesh;
  const JetFitter fitter(m);
  ResidualAccumulator acc(m);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!regular_interior(m, fitter, v) || !stencil_defined(fitter, v, normals.vertex_defined)) continue;
    const Vec3 lap = fitter.laplacian(v, normals.vertex);
    const Vec3 res = lap + 2.0 * density.p[v] * normals.vertex[v] +
                     2.0 * density.E[v] * field.grad(state.X[v]);
    // E / |X|^2 is the natural size of Delta N; it keeps the reference away
    // from zero on planar pieces
    acc.add(v, res.norm(), std::max(lap.norm(), density.E[v] / state.X[v].squaredNorm()));
  }
  return acc.result();
}

EnclosureMargins check_enclosure(const SurfaceState& state, const CurvatureField& field,
                                 double beta) {
  const DiskMesh& m = *state.mesh;
  const double cb = std::cos(beta);
  std::vector<double> phi(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) {
    const double r = state.X[v].norm();
    if (r < 1e-10) throw OriginHit("surface passes through the origin at vertex " + std::to_string(v));
    phi[v] = state.X[v].z() - r * cb;
  }
  EnclosureMargins out;
  out.min_boundary_phi = out.min_interior_phi = std::numeric_limits<double>::infinity();
  for (int v = 0; v < m.num_vertices(); ++v) {
    double& slot = m.on_boundary[v] ? out.min_boundary_phi : out.min_interior_phi;
    slot = std::min(slot, phi[v]);
  }

  const JetFitter fitter(m);
  ResidualAccumulator acc(m);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!regular_interior(m, fitter, v)) continue;
    const Jet3 j = fitter.jet(v, state.X);
    const Vec3& X = state.X[v];
    const double r = X.norm();
    const Vec3 P = X / r;
    const Vec3 n = j[1].cross(j[2]);
    const double E = 0.5 * (j[1].squaredNorm() + j[2].squaredNorm());
    if (!(j[1].norm() > kDegenerateNorm && j[2].norm() > kDegenerateNorm)) continue;
    const double H = field.eval(X);
    const double pu = P.dot(j[1].normalized()), pv = P.dot(j[2].normalized());
    const double rhs = -2.0 * H * n.z() + 2.0 * E * cb / r + 2.0 * H * P.dot(n) * cb -
                       (pu * pu + pv * pv) * E * cb / r;
    const double lap = fitter.laplacian(v, phi);
    acc.add(v, std::abs(-lap - rhs), std::abs(lap));
  }
  out.identity_residual = acc.result();
  return out;
}

ConeConditionMargins check_cone_condition_functions(const SurfaceState& state,
                                                    const SphericalBoundary& boundary,
                                                    double beta, int n_axes, int n_domain) {
  const DiskMesh& m = *state.mesh;
  if (n_axes < 1) throw OutOfRange("need at least one axis");
  const auto samples = boundary.domain_samples(n_domain);
  const int nb = static_cast<int>(m.boundary.size());
  const double cb = std::cos(beta);
  const double h = m.radial_spacing();
  ConeConditionMargins out;
  out.n_axes = n_axes;
  out.min_interior = std::numeric_limits<double>::infinity();
  out.max_normal_derivative = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n_axes; ++a) {
    const int k = static_cast<int>(static_cast<long>(a) * nb / n_axes);
    const UnitVec axis = axis_at(boundary, beta, state.theta[k], samples);
    auto phi = [&](int v) { return state.X[v].dot(axis.vec()) - state.X[v].norm() * cb; };
    double lo = std::numeric_limits<double>::infinity();
    for (int v = 0; v < m.num_vertices(); ++v) {
      if (!m.on_boundary[v]) lo = std::min(lo, phi(v));
    }
    const int j = m.sector_of(m.boundary[k]);
    const double d = (3.0 * phi(m.vertex(m.n_r, j)) - 4.0 * phi(m.vertex(m.n_r - 1, j)) +
                      phi(m.vertex(m.n_r - 2, j))) /
                     (2.0 * h);
    out.interior_minima.push_back(lo);
    out.normal_derivatives.push_back(d);
    out.min_interior = std::min(out.min_interior, lo);
    out.max_normal_derivative = std::max(out.max_normal_derivative, d);
  }
  return out;
}

RadialNormalMargins check_radial_normal(const SurfaceState& state, const CurvatureField& field,
                                        const DensityField& density, const NormalField& normals) {
  const DiskMesh& m = *state.mesh;
  const int nv = m.num_vertices();
  std::vector<double> f(nv, 0.0);
  RadialNormalMargins out;
  out.min_closure = out.min_abs_boundary = std::numeric_limits<double>::infinity();
  for (int v = 0; v < nv; ++v) {
    if (!normals.vertex_defined[v]) continue;
    f[v] = normals.vertex[v].dot(state.X[v]);
    out.min_closure = std::min(out.min_closure, f[v]);
    if (m.on_boundary[v]) out.min_abs_boundary = std::min(out.min_abs_boundary, std::abs(f[v]));
  }
  const JetFitter fitter(m);
  ResidualAccumulator acc(m);
  for (int v = 0; v < nv; ++v) {
    if (!regular_interior(m, fitter, v) || !stencil_defined(fitter, v, normals.vertex_defined)) continue;
    const Vec3& X = state.X[v];
    const double lap = fitter.laplacian(v, f);
    const double res = lap + 2.0 * density.p[v] * f[v] +
                       2.0 * density.E[v] * (field.grad(X).dot(X) + field.eval(X));
    acc.add(v, std::abs(res), std::max(std::abs(lap), density.E[v] / X.norm()));
  }
  out.residual = acc.result();
  return out;
}

int projection_degree(const SurfaceState& state, int n_probe) {
  const DiskMesh& m = *state.mesh;
  Vec3 centroid = Vec3::Zero();
  for (int v : m.boundary) centroid += radial_project(state.X[v]).vec();
  const Mat3 R = rotation_to_north(UnitVec::normalized(centroid));
  auto planar = [&](int v) {
    return stereographic_south(UnitVec::normalized(R * radial_project(state.X[v]).vec()));
  };
  std::vector<Vec2> loop;
  for (int v : m.boundary) loop.push_back(planar(v));

  std::vector<int> candidates;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.ring_of(v) <= m.n_r / 2) candidates.push_back(v);
  }
  n_probe = std::clamp(n_probe, 1, static_cast<int>(candidates.size()));
  int degree = 0;
  for (int k = 0; k < n_probe; ++k) {
    const int v = candidates[static_cast<std::size_t>(k) * candidates.size() / n_probe];
    const int d = winding_degree(loop, planar(v));
    if (k > 0 && d != degree) {
      throw InconsistentDegree("probe points disagree on the degree (" + std::to_string(degree) +
                               " vs " + std::to_string(d) + ")");
    }
    degree = d;
  }
  return degree;
}

double jacobian_identity_check(const SurfaceState& state) {
  const DiskMesh& m = *state.mesh;
  std::vector<Vec3> px(state.X.size());
  for (std::size_t v = 0; v < px.size(); ++v) px[v] = radial_project(state.X[v]).vec();
  double worst = 0.0, scale = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    const auto [pu, pv] = triangle_derivatives(m, t, px);
    const Vec3 c = (state.X[tri[0]] + state.X[tri[1]] + state.X[tri[2]]) / 3.0;
    const double r = c.norm();
    const double lhs = pu.cross(pv).dot(c / r);
    const double rhs = xu.cross(xv).dot(c) / (r * r * r);
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  return scale > 0.0 ? worst / scale : worst;
}

RadialGraph extract_radial_graph(const SurfaceState& state, const std::vector<UnitVec>& grid) {
  const DiskMesh& m = *state.mesh;
  constexpr double tol = 1e-10;
  std::vector<Vec3> px(state.X.size());
  for (std::size_t v = 0; v < px.size(); ++v) px[v] = radial_project(state.X[v]).vec();

  RadialGraph out;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const Vec3& p = grid[gi].vec();
    const Vec3 e1 = p.unitOrthogonal();
    const Vec3 e2 = p.cross(e1);
    int strict = 0, strict_tri = -1, edge_tri = -1;
    for (int t = 0; t < m.num_triangles(); ++t) {
      const auto& tri = m.triangles[t];
      Vec2 y[3];
      bool visible = true;
      for (int k = 0; k < 3; ++k) {
        const double d = px[tri[k]].dot(p);
        if (d <= 1e-12) {
          visible = false;
          break;
        }
        const Vec3 g = px[tri[k]] / d;
        y[k] = Vec2(g.dot(e1), g.dot(e2));
      }
      if (!visible) continue;
      const double area2 = (y[1] - y[0]).x() * (y[2] - y[0]).y() - (y[1] - y[0]).y() * (y[2] - y[0]).x();
      if (std::abs(area2) < 1e-300) continue;
      double b[3];
      for (int k = 0; k < 3; ++k) {
        const Vec2& a = y[(k + 1) % 3];
        const Vec2& c = y[(k + 2) % 3];
        b[k] = (a.x() * c.y() - a.y() * c.x()) / area2;
      }
      const double lo = std::min({b[0], b[1], b[2]});
      if (lo > tol) {
        ++strict;
        strict_tri = t;
      } else if (lo >= -tol && edge_tri < 0) {
        edge_tri = t;  // lowest index wins ties on shared edges
      }
    }
    if (strict > 1) throw NotInjectiveAt(static_cast<int>(gi), strict);
    int chosen = strict_tri;
    if (strict == 0) {
      if (edge_tri < 0) throw Uncovered("grid point " + std::to_string(gi) + " is not covered");
      chosen = edge_tri;
      ++out.edge_hits;
    }
    const auto& tri = m.triangles[chosen];
    const Vec3& x0 = state.X[tri[0]];
    const Vec3 n = (state.X[tri[1]] - x0).cross(state.X[tri[2]] - x0);
    out.points.push_back(grid[gi]);
    out.lambda.push_back(n.dot(x0) / n.dot(p));
    out.triangle.push_back(chosen);
  }
  return out;
}

std::vector<UnitVec> interior_grid(const SphericalBoundary& boundary, int n, double shrink) {
  if (n < 1) throw OutOfRange("grid needs at least one point");
  if (!(shrink > 0.0 && shrink < 1.0)) throw OutOfRange("shrink must lie in (0, 1)");
  std::vector<UnitVec> out{UnitVec::checked(Vec3::UnitZ())};
  if (n == 1) return out;
  const int rings = std::max(1, static_cast<int>(std::lround(std::sqrt(n / std::numbers::pi))));
  const double weight_sum = 0.5 * rings * (rings + 1);
  int remaining = n - 1;
  for (int i = 1; i <= rings; ++i) {
    const int count = i == rings ? remaining
                                 : std::max(1, static_cast<int>(std::lround((n - 1) * i / weight_sum)));
    remaining -= count;
    const double rho = shrink * i / rings;
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5 * (i % 2)) / count;
      const double colat = rho * boundary.colatitude_at_azimuth(phi);
      out.push_back(UnitVec::normalized(Vec3(std::sin(colat) * std::cos(phi),
                                             std::sin(colat) * std::sin(phi), std::cos(colat))));
    }
  }
  return out;
}

void VerifyConfig::validate() const {
  if (!(tau_b > 0.0) || !(stability_tol_rel > 0.0) || !(defect_tol > 0.0) ||
      !(jacobian_tol > 0.0) || !(residual_tol > 0.0)) {
    throw OutOfRange("verification tolerances must be positive");
  }
  if (n_axes < 1 || n_probe < 1 || grid_points < 1 || n_boundary < 8 || n_domain < 16) {
    throw OutOfRange("verification sample counts are too small");
  }
  if (!(grid_shrink > 0.0 && grid_shrink < 1.0)) throw OutOfRange("grid_shrink must lie in (0, 1)");
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

VerificationReport verify(const SurfaceState& state, const RadialGraphCurve& curve,
                          const CurvatureField& field, double beta, const VerifyConfig& config) {
  config.validate();
  VerificationReport rep;
  auto add = [&](std::string name, double value, double tol, bool pass, std::string units,
                 std::string note = {}) {
    rep.checks.push_back({std::move(name), value, tol, pass, std::move(units), std::move(note)});
  };
  const SphericalBoundary& boundary = curve.boundary();

  const BetaConvexityReport bc = is_beta_convex(boundary, beta, config.n_boundary, config.n_domain);
  add("beta_convex", bc.margin, bc.tolerance, bc.beta_convex, "1",
      std::to_string(bc.n_boundary) + " boundary x " + std::to_string(bc.n_domain) + " domain samples");
  add("solver_converged", state.residual, 0.0, state.converged, "1/length",
      "strong-form residual relative to the curve scale");
  add("conformality_defect", conformality_defect(state), config.defect_tol,
      conformality_defect(state) <= config.defect_tol, "1");

  const NormalField normals = gauss_map(state, config.tau_b);
  rep.branch_triangles = normals.branch_triangles;
  add("branch_points", static_cast<double>(normals.branch_triangles.size()), 0.0,
      normals.branch_triangles.empty(), "count", "tau_b=" + std::to_string(config.tau_b));
  const DensityField density = density_field(state, field, normals);

  try {
    const EnclosureMargins enc = check_enclosure(state, field, beta);
    add("cone_margin_boundary", enc.min_boundary_phi, -1e-12 * state.scale,
        enc.min_boundary_phi >= -1e-12 * state.scale, "length");
    add("cone_margin_interior", enc.min_interior_phi, 0.0, enc.min_interior_phi > 0.0, "length");
    add("enclosure_identity_residual", enc.identity_residual.relative(), config.residual_tol,
        enc.identity_residual.relative() <= config.residual_tol, "1", "relative rms");
  } catch (const OriginHit& e) {
    add("cone_margin_interior", 0.0, 0.0, false, "length", e.what());
  }

  if (bc.beta_convex) {
    try {
      const int sign = orientation_sign(boundary, beta, config.n_boundary, config.n_domain);
      add("orientation", sign, -1.0, sign == -1, "sign", "-1 is positive orientation");
    } catch (const SignChange& e) {
      add("orientation", 0.0, -1.0, false, "sign", e.what());
    }
    const ConeConditionMargins cc =
        check_cone_condition_functions(state, boundary, beta, config.n_axes, config.n_domain);
    add("cone_condition_interior", cc.min_interior, 0.0, cc.min_interior > 0.0, "length",
        std::to_string(cc.n_axes) + " axes");
    add("cone_condition_normal_derivative", cc.max_normal_derivative, 0.0,
        cc.max_normal_derivative < 0.0, "length");
  } else {
    add("cone_condition_interior", 0.0, 0.0, false, "length", "skipped: domain not beta-convex");
  }

  const RadialNormalMargins rn = check_radial_normal(state, field, density, normals);
  add("radial_normal_min", rn.min_closure, 0.0, rn.min_closure > 0.0, "length");
  add("radial_normal_boundary", rn.min_abs_boundary, 0.0, rn.min_abs_boundary > 0.0, "length");
  add("radial_normal_residual", rn.residual.relative(), config.residual_tol,
      rn.residual.relative() <= config.residual_tol, "1", "relative rms");
  const ResidualNorm ne = normal_equation_residual(state, field, normals, density);
  add("normal_equation_residual", ne.relative(), config.residual_tol,
      ne.relative() <= config.residual_tol, "1", "relative rms");

  const double tol_stab = config.stability_tol_rel * median(density.E);
  try {
    rep.mu1 = stability_eigenvalue(state, density).mu1;
    add("stability_mu1", rep.mu1, -tol_stab, rep.mu1 >= -tol_stab, "1");
  } catch (const EigensolverFailure& e) {
    add("stability_mu1", 0.0, -tol_stab, false, "1", e.what());
  }

  try {
    rep.degree = projection_degree(state, config.n_probe);
    add("projection_degree", rep.degree, 1.0, rep.degree == 1, "count",
        std::to_string(config.n_probe) + " probes");
  } catch (const Error& e) {
    add("projection_degree", 0.0, 1.0, false, "count", e.what());
  }

  const double jac = jacobian_identity_check(state);
  add("jacobian_identity", jac, config.jacobian_tol, jac <= config.jacobian_tol, "1");

  if (rep.degree == 1) {
    try {
      rep.graph = extract_radial_graph(
          state, interior_grid(boundary, config.grid_points, config.grid_shrink));
      rep.injective = true;
      add("radial_graph", static_cast<double>(rep.graph.points.size()), config.grid_points, true,
          "count", std::to_string(rep.graph.edge_hits) + " edge tie-breaks");
    } catch (const Error& e) {
      add("radial_graph", 0.0, config.grid_points, false, "count", e.what());
    }
  } else {
    add("radial_graph", 0.0, config.grid_points, false, "count", "skipped: degree is not +1");
  }
  return rep;
}

}  // namespace hcone
