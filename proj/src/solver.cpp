#include "hcone/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace hcone {

namespace {

using Rows3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Discrete energy consistent with the stiffness matrix (true triangle areas).
double discrete_energy(const DiskMesh& mesh, const std::vector<Vec3>& X,
                       const CurvatureField& field) {
  double e = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto [xu, xv] = triangle_derivatives(mesh, t, X);
    e += 0.5 * mesh.area[t] * (xu.squaredNorm() + xv.squaredNorm());
    if (field.family() != FieldFamily::zero) {
      const auto& tri = mesh.triangles[t];
      const Vec3 c = (X[tri[0]] + X[tri[1]] + X[tri[2]]) / 3.0;
      e += 2.0 * mesh.area[t] * build_potential_Q(field, c).dot(xu.cross(xv));
    }
  }
  return e;
}

bool strictly_monotone(const std::vector<double>& theta) {
  const std::size_t n = theta.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(theta[k + 1] > theta[k])) return false;
  }
  return theta[n - 1] < theta[0] + 2.0 * std::numbers::pi;
}

// Smooths a periodic sequence by damping Fourier mode k with 1/max(k, 1).
std::vector<double> smooth_periodic(const std::vector<double>& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::complex<double>> c(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) s += g[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
    const int freq = std::min(k, n - k);
    c[k] = s / static_cast<double>(std::max(freq, 1));
  }
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    std::complex<double> s = 0.0;
    for (int k = 0; k < n; ++k) s += c[k] * std::polar(1.0, 2.0 * std::numbers::pi * j * k / n);
    out[j] = s.real() / n;
  }
  return out;
}

}  // namespace

void SolveConfig::validate() const {
  if (max_iters < 1) throw OutOfRange("max_iters must be positive");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw OutOfRange("relaxation must lie in (0, 1]");
  if (!(residual_tol > 0.0) || !(update_tol > 0.0)) throw OutOfRange("tolerances must be positive");
  if (continuation_steps < 1) throw OutOfRange("continuation_steps must be at least 1");
  if (reparam_sweeps < 0) throw OutOfRange("reparam_sweeps must be nonnegative");
}

struct Solver::Factor {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

Solver::Solver(std::shared_ptr<const DiskMesh> mesh) : mesh_(std::move(mesh)) {
  const DiskMesh& m = *mesh_;
  const int n = m.num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  lumped_mass_.assign(n, 0.0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const auto& g = m.basis_grad[t];
    for (int a = 0; a < 3; ++a) {
      lumped_mass_[tri[a]] += m.area[t] / 3.0;
      for (int b = 0; b < 3; ++b) trip.emplace_back(tri[a], tri[b], m.area[t] * g[a].dot(g[b]));
    }
  }
  stiffness_.resize(n, n);
  stiffness_.setFromTriplets(trip.begin(), trip.end());

  interior_index_.assign(n, -1);
  std::vector<int> boundary_slot(n, -1);
  for (std::size_t k = 0; k < m.boundary.size(); ++k) boundary_slot[m.boundary[k]] = static_cast<int>(k);
  for (int v = 0; v < n; ++v) {
    if (!m.on_boundary[v]) {
      interior_index_[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }
  std::vector<Eigen::Triplet<double>> tii, tib;
  for (int col = 0; col < stiffness_.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, col); it; ++it) {
      const int i = interior_index_[it.row()];
      if (i < 0) continue;
      const int j = interior_index_[it.col()];
      if (j >= 0) tii.emplace_back(i, j, it.value());
      else tib.emplace_back(i, boundary_slot[it.col()], it.value());
    }
  }
  const int ni = static_cast<int>(interior_.size());
  Eigen::SparseMatrix<double> kii(ni, ni);
  kii.setFromTriplets(tii.begin(), tii.end());
  k_ib_.resize(ni, static_cast<int>(m.boundary.size()));
  k_ib_.setFromTriplets(tib.begin(), tib.end());
  factor_ = std::make_shared<Factor>();
  factor_->ldlt.compute(kii);
  if (factor_->ldlt.info() != Eigen::Success) throw DegenerateInput("stiffness factorization failed");
}

std::vector<Vec3> Solver::harmonic_extension(const std::vector<Vec3>& boundary_values) const {
  const DiskMesh& m = *mesh_;
  Rows3 xb(boundary_values.size(), 3);
  for (std::size_t k = 0; k < boundary_values.size(); ++k) xb.row(k) = boundary_values[k].transpose();
  const Rows3 xi = factor_->ldlt.solve(Rows3(-(k_ib_ * xb)));
  std::vector<Vec3> X(m.num_vertices());
  for (std::size_t k = 0; k < interior_.size(); ++k) X[interior_[k]] = xi.row(k).transpose();
  for (std::size_t k = 0; k < m.boundary.size(); ++k) X[m.boundary[k]] = boundary_values[k];
  return X;
}

namespace {

std::vector<Vec3> curvature_load(const DiskMesh& m, const std::vector<Vec3>& X,
                                 const CurvatureField& field) {
  std::vector<Vec3> F(m.num_vertices(), Vec3::Zero());
  if (field.family() == FieldFamily::zero) return F;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const auto [xu, xv] = triangle_derivatives(m, t, X);
    const Vec3 c = (X[tri[0]] + X[tri[1]] + X[tri[2]]) / 3.0;
    const Vec3 w = 2.0 * field.eval(c) * xu.cross(xv) * (m.area[t] / 3.0);
    for (int k = 0; k < 3; ++k) F[tri[k]] += w;
  }
  return F;
}

}  // namespace

std::vector<Vec3> Solver::energy_gradient(const std::vector<Vec3>& X,
                                          const CurvatureField& field) const {
  std::vector<Vec3> g = curvature_load(*mesh_, X, field);
  for (int col = 0; col < stiffness_.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, col); it; ++it) {
      g[it.row()] += it.value() * X[it.col()];
    }
  }
  return g;
}

std::vector<Vec3> Solver::boundary_sensitivity(const std::vector<Vec3>& dJ_dX) const {
  const DiskMesh& m = *mesh_;
  const int ni = static_cast<int>(interior_.size());
  Rows3 gi(ni, 3);
  for (int k = 0; k < ni; ++k) gi.row(k) = dJ_dX[interior_[k]].transpose();
  const Rows3 adj = factor_->ldlt.solve(gi);
  const Rows3 corr = k_ib_.transpose() * adj;
  std::vector<Vec3> out(m.boundary.size());
  for (std::size_t k = 0; k < m.boundary.size(); ++k) {
    out[k] = dJ_dX[m.boundary[k]] - corr.row(k).transpose();
  }
  return out;
}

double Solver::strong_residual(const std::vector<Vec3>& X, const CurvatureField& field) const {
  const std::vector<Vec3> g = energy_gradient(X, field);
  double r = 0.0;
  for (int v : interior_) r = std::max(r, g[v].lpNorm<Eigen::Infinity>() / lumped_mass_[v]);
  return r;
}

SurfaceState Solver::solve(const RadialGraphCurve& curve, const CurvatureField& field,
                           const SolveConfig& config, const std::vector<double>* theta,
                           const std::vector<Vec3>* warm_start) const {
  config.validate();
  const DiskMesh& m = *mesh_;
  const int nb = static_cast<int>(m.boundary.size());

  SurfaceState s;
  s.mesh = mesh_;
  s.theta = theta ? *theta : curve.arclength_parameters(nb);
  if (static_cast<int>(s.theta.size()) != nb) throw OutOfRange("theta must have one entry per boundary vertex");
  s.pinned = {0, nb / 3, 2 * nb / 3};

  std::vector<Vec3> xb(nb);
  for (int k = 0; k < nb; ++k) {
    xb[k] = curve.point(s.theta[k]);
    s.scale = std::max(s.scale, xb[k].norm());
  }
  if (warm_start) {
    s.X = *warm_start;
    for (int k = 0; k < nb; ++k) s.X[m.boundary[k]] = xb[k];
  } else {
    s.X = harmonic_extension(xb);
  }

  Rows3 xbm(nb, 3);
  for (int k = 0; k < nb; ++k) xbm.row(k) = xb[k].transpose();
  const Rows3 rhs_b = k_ib_ * xbm;
  const int ni = static_cast<int>(interior_.size());
  const bool zero_field = field.family() == FieldFamily::zero;
  const int steps = (zero_field || warm_start) ? 1 : config.continuation_steps;

  for (int step = 1; step <= steps; ++step) {
    const double fs = static_cast<double>(step) / steps;
    const CurvatureField f = field.scaled(fs);
    bool step_done = false;
    for (int it = 1; it <= config.max_iters; ++it) {
      const std::vector<Vec3> load = curvature_load(m, s.X, f);
      Rows3 rhs(ni, 3);
      for (int k = 0; k < ni; ++k) rhs.row(k) = -load[interior_[k]].transpose();
      rhs -= rhs_b;
      const Rows3 xs = factor_->ldlt.solve(rhs);
      double update = 0.0;
      for (int k = 0; k < ni; ++k) {
        Vec3& x = s.X[interior_[k]];
        const Vec3 dx = config.relaxation * (xs.row(k).transpose() - x);
        x += dx;
        update = std::max(update, dx.lpNorm<Eigen::Infinity>());
        if (!x.allFinite()) throw NoConvergence(s.iterations + it, std::numeric_limits<double>::infinity());
        if (!f.defined_at_origin() && x.norm() < 1e-10) {
          throw FieldOutOfDomain("iterate reached the origin where the field is undefined");
        }
      }
      ++s.iterations;
      s.last_update = update / s.scale;
      s.log.push_back({step, it, fs, s.last_update, std::numeric_limits<double>::quiet_NaN()});
      if (s.last_update <= config.update_tol) {
        step_done = true;
        break;
      }
    }
    s.residual = strong_residual(s.X, f) / s.scale;
    s.log.back().residual = s.residual;
    if (!step_done) throw NoConvergence(s.iterations, s.residual);
  }
  if (s.residual > config.residual_tol) throw NoConvergence(s.iterations, s.residual);
  s.converged = true;
  return s;
}

SurfaceState solve(std::shared_ptr<const DiskMesh> mesh, const RadialGraphCurve& curve,
                   const CurvatureField& field, const SolveConfig& config) {
  return Solver(std::move(mesh)).solve(curve, field, config);
}

namespace {

template <class AreaTerm>
double energy_with(const SurfaceState& state, const CurvatureField& field, AreaTerm area_term) {
  const DiskMesh& m = *state.mesh;
  double e = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    double integrand = area_term(xu, xv);
    if (field.family() != FieldFamily::zero) {
      const auto& tri = m.triangles[t];
      const Vec3 c = (state.X[tri[0]] + state.X[tri[1]] + state.X[tri[2]]) / 3.0;
      integrand += 2.0 * build_potential_Q(field, c).dot(xu.cross(xv));
    }
    e += m.quad_weight[t] * integrand;
  }
  return e;
}

}  // namespace

double energy_F(const SurfaceState& state, const CurvatureField& field) {
  return energy_with(state, field, [](const Vec3& xu, const Vec3& xv) {
    return 0.5 * (xu.squaredNorm() + xv.squaredNorm());
  });
}

double energy_G(const SurfaceState& state, const CurvatureField& field) {
  return energy_with(state, field,
                     [](const Vec3& xu, const Vec3& xv) { return xu.cross(xv).norm(); });
}

std::vector<double> triangle_defects(const SurfaceState& state) {
  const DiskMesh& m = *state.mesh;
  std::vector<double> e(m.num_triangles()), num(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    e[t] = xu.squaredNorm();
    num[t] = std::abs(xu.squaredNorm() - xv.squaredNorm()) + 2.0 * std::abs(xu.dot(xv));
  }
  const double floor = 1e-14 * median(e);
  std::vector<double> d(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double den = std::max(e[t], floor);
    d[t] = den > 0.0 ? num[t] / den : 0.0;
  }
  return d;
}

double conformality_defect(const SurfaceState& state) {
  const auto d = triangle_defects(state);
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

double integrated_defect(const SurfaceState& state) {
  const DiskMesh& m = *state.mesh;
  double num = 0.0, den = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    const double a = xu.squaredNorm() - xv.squaredNorm();
    const double b = xu.dot(xv);
    num += m.area[t] * (a * a + 4.0 * b * b);
    den += m.area[t] * 0.5 * (xu.squaredNorm() + xv.squaredNorm());
  }
  return den > 0.0 ? num / (den * den) : 0.0;
}

std::vector<Vec3> integrated_defect_gradient(const SurfaceState& state) {
  const DiskMesh& m = *state.mesh;
  double num = 0.0, den = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    const double a = xu.squaredNorm() - xv.squaredNorm();
    const double b = xu.dot(xv);
    num += m.area[t] * (a * a + 4.0 * b * b);
    den += m.area[t] * 0.5 * (xu.squaredNorm() + xv.squaredNorm());
  }
  std::vector<Vec3> g(m.num_vertices(), Vec3::Zero());
  if (!(den > 0.0)) return g;
  const double c_num = 1.0 / (den * den);
  const double c_den = -2.0 * num / (den * den * den);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const auto& gb = m.basis_grad[t];
    const auto [xu, xv] = triangle_derivatives(m, t, state.X);
    const double a = xu.squaredNorm() - xv.squaredNorm();
    const double b = xu.dot(xv);
    for (int k = 0; k < 3; ++k) {
      const double gu = gb[k].x(), gv = gb[k].y();
      const Vec3 da = 2.0 * (gu * xu - gv * xv);
      const Vec3 db = gu * xv + gv * xu;
      const Vec3 dnum = 2.0 * a * da + 8.0 * b * db;
      const Vec3 dden = gu * xu + gv * xv;
      g[tri[k]] += m.area[t] * (c_num * dnum + c_den * dden);
    }
  }
  return g;
}

ReparamResult reparametrize_boundary(const SurfaceState& state, const RadialGraphCurve& curve,
                                     const CurvatureField& field, const SolveConfig& config,
                                     int sweeps, double energy_slack) {
  const Solver solver(state.mesh);
  const DiskMesh& m = *state.mesh;
  const int nb = static_cast<int>(m.boundary.size());

  ReparamResult result{state, {}};
  SurfaceState& cur = result.state;
  double energy = discrete_energy(m, cur.X, field);
  double idef = integrated_defect(cur);
  result.sweeps.push_back({energy, idef, conformality_defect(cur), 0.0});

  double min_gap = 2.0 * std::numbers::pi;
  for (int k = 0; k < nb; ++k) {
    const double next = k + 1 < nb ? cur.theta[k + 1] : cur.theta[0] + 2.0 * std::numbers::pi;
    min_gap = std::min(min_gap, next - cur.theta[k]);
  }
  double step = 0.25 * min_gap;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    // The interior response ignores the linearized curvature term; the line
    // search below only needs a descent direction.
    const std::vector<Vec3> grad = solver.boundary_sensitivity(integrated_defect_gradient(cur));
    std::vector<double> g(nb);
    for (int k = 0; k < nb; ++k) g[k] = grad[k].dot(curve.tangent(cur.theta[k]));
    for (int p : cur.pinned) g[p] = 0.0;
    std::vector<double> d = smooth_periodic(g);
    for (int p : cur.pinned) d[p] = 0.0;
    double dmax = 0.0;
    for (double x : d) dmax = std::max(dmax, std::abs(x));
    if (dmax == 0.0) break;

    bool accepted = false, stalled = false;
    for (int trial = 0; trial < 40 && !accepted; ++trial, step *= 0.5) {
      std::vector<double> theta = cur.theta;
      for (int k = 0; k < nb; ++k) theta[k] -= step * d[k] / dmax;
      if (!strictly_monotone(theta)) continue;
      SurfaceState next;
      try {
        next = solver.solve(curve, field, config, &theta, &cur.X);
      } catch (const NoConvergence&) {
        continue;
      }
      const double e = discrete_energy(m, next.X, field);
      const double id = integrated_defect(next);
      if (id < idef && e <= energy + energy_slack * std::abs(energy)) {
        next.pinned = cur.pinned;
        next.log.insert(next.log.begin(), cur.log.begin(), cur.log.end());
        next.iterations += cur.iterations;
        cur = std::move(next);
        energy = e;
        stalled = idef - id < 1e-5 * idef;
        idef = id;
        result.sweeps.push_back({energy, idef, conformality_defect(cur), step});
        accepted = true;
      }
    }
    if (!accepted || stalled) break;
    step *= 4.0;  // undo the last halving and try a larger step next sweep
  }
  return result;
}

}  // namespace hcone
