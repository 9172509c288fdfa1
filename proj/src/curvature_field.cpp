#include "hcone/curvature_field.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hcone {

std::string to_string(FieldFamily family) {
  switch (family) {
    case FieldFamily::zero: return "zero";
    case FieldFamily::constant: return "constant";
    case FieldFamily::radial: return "radial";
    case FieldFamily::power: return "power";
    case FieldFamily::modulated: return "modulated";
    case FieldFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

struct CurvatureField::Table {
  FieldTable data;
  std::vector<double> d_dr;    // nodal derivative tables, same layout as values
  std::vector<double> d_dpsi;
  mutable std::atomic<long> clamped{0};

  std::size_t cols() const { return data.colatitudes.size(); }
  double at(const std::vector<double>& grid, std::size_t i, std::size_t j) const {
    return grid[i * cols() + j];
  }
};

namespace {

// Index of the cell containing x and the local coordinate in [0,1]; x is
// assumed already clamped to [knots.front(), knots.back()].
std::pair<std::size_t, double> locate(const std::vector<double>& knots, double x) {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots.begin() - 1, 0));
  i = std::min(i, knots.size() - 2);
  const double w = (x - knots[i]) / (knots[i + 1] - knots[i]);
  return {i, std::clamp(w, 0.0, 1.0)};
}

std::vector<double> nodal_difference(const FieldTable& t, bool along_radius) {
  const std::size_t nr = t.radii.size(), nc = t.colatitudes.size();
  std::vector<double> out(nr * nc);
  const auto& knots = along_radius ? t.radii : t.colatitudes;
  const std::size_t n = knots.size();
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      const std::size_t k = along_radius ? i : j;
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 == n ? k : k + 1;
      auto value = [&](std::size_t m) {
        return along_radius ? t.values[m * nc + j] : t.values[i * nc + m];
      };
      out[i * nc + j] = (value(hi) - value(lo)) / (knots[hi] - knots[lo]);
    }
  }
  return out;
}

}  // namespace

CurvatureField CurvatureField::zero() { return CurvatureField{}; }

CurvatureField CurvatureField::constant(double h0) {
  CurvatureField f;
  f.family_ = FieldFamily::constant;
  f.c_ = h0;
  return f;
}

CurvatureField CurvatureField::radial(double c) {
  CurvatureField f;
  f.family_ = FieldFamily::radial;
  f.c_ = c;
  return f;
}

CurvatureField CurvatureField::power(double c, double s) {
  if (!(s > -1.0 && s < 2.0)) {
    throw OutOfRange("power field exponent s must lie in (-1, 2)");
  }
  CurvatureField f;
  f.family_ = FieldFamily::power;
  f.c_ = c;
  f.s_ = s;
  return f;
}

CurvatureField CurvatureField::modulated(double c, double a) {
  CurvatureField f;
  f.family_ = FieldFamily::modulated;
  f.c_ = c;
  f.a_ = a;
  return f;
}

CurvatureField CurvatureField::tabulated(FieldTable table) {
  const std::size_t nr = table.radii.size(), nc = table.colatitudes.size();
  if (nr < 2 || nc < 2 || table.values.size() != nr * nc) {
    throw OutOfRange("tabulated field needs at least a 2x2 grid of values");
  }
  if (!std::is_sorted(table.radii.begin(), table.radii.end(), std::less_equal<>()) ||
      !std::is_sorted(table.colatitudes.begin(), table.colatitudes.end(), std::less_equal<>()) ||
      table.radii.front() <= 0.0 || table.colatitudes.front() < 0.0 ||
      table.colatitudes.back() >= std::numbers::pi / 2) {
    throw OutOfRange("tabulated field grid must be strictly increasing inside the cone");
  }
  auto t = std::make_shared<Table>();
  t->d_dr = nodal_difference(table, true);
  t->d_dpsi = nodal_difference(table, false);
  t->data = std::move(table);
  CurvatureField f;
  f.family_ = FieldFamily::tabulated;
  f.table_ = std::move(t);
  return f;
}

CurvatureField CurvatureField::scaled(double factor) const {
  CurvatureField f = *this;
  f.scale_ *= factor;
  return f;
}

long CurvatureField::clamped_evaluations() const { return table_ ? table_->clamped.load() : 0; }

double CurvatureField::eval(const Vec3& p) const {
  switch (family_) {
    case FieldFamily::zero: return 0.0;
    case FieldFamily::constant: return scale_ * c_;
    case FieldFamily::radial: return scale_ * c_ / p.norm();
    case FieldFamily::power: return scale_ * c_ / std::pow(p.norm(), 1.0 + s_);
    case FieldFamily::modulated: {
      const double r = p.norm();
      return scale_ * (c_ + a_ * p.z() / r) / r;
    }
    case FieldFamily::tabulated: {
      const Table& t = *table_;
      const double r = p.norm();
      const double psi = std::acos(std::clamp(p.z() / r, -1.0, 1.0));
      const auto& rk = t.data.radii;
      const auto& pk = t.data.colatitudes;
      const double rc = std::clamp(r, rk.front(), rk.back());
      const double pc = std::clamp(psi, pk.front(), pk.back());
      if (rc != r || pc != psi) t.clamped.fetch_add(1, std::memory_order_relaxed);
      const auto [i, wr] = locate(rk, rc);
      const auto [j, wp] = locate(pk, pc);
      const auto& v = t.data.values;
      const double h = (1 - wr) * (1 - wp) * t.at(v, i, j) + wr * (1 - wp) * t.at(v, i + 1, j) +
                       (1 - wr) * wp * t.at(v, i, j + 1) + wr * wp * t.at(v, i + 1, j + 1);
      return scale_ * h;
    }
  }
  return 0.0;
}

Vec3 CurvatureField::grad(const Vec3& p) const {
  switch (family_) {
    case FieldFamily::zero:
    case FieldFamily::constant: return Vec3::Zero();
    case FieldFamily::radial: {
      const double r = p.norm();
      return -scale_ * c_ * p / (r * r * r);
    }
    case FieldFamily::power: {
      const double r = p.norm();
      return -scale_ * (1.0 + s_) * c_ * p / std::pow(r, 3.0 + s_);
    }
    case FieldFamily::modulated: {
      const double r = p.norm();
      const double r2 = r * r;
      const Vec3 d_inv_r = -p / (r2 * r);
      const Vec3 d_z_r2 = Vec3::UnitZ() / r2 - 2.0 * p.z() * p / (r2 * r2);
      return scale_ * (c_ * d_inv_r + a_ * d_z_r2);
    }
    case FieldFamily::tabulated: {
      const Table& t = *table_;
      const double r = p.norm();
      const Vec3 rhat = p / r;
      const double psi = std::acos(std::clamp(rhat.z(), -1.0, 1.0));
      const auto& rk = t.data.radii;
      const auto& pk = t.data.colatitudes;
      const double rc = std::clamp(r, rk.front(), rk.back());
      const double pc = std::clamp(psi, pk.front(), pk.back());
      const auto [i, wr] = locate(rk, rc);
      const auto [j, wp] = locate(pk, pc);
      auto interp = [&](const std::vector<double>& g) {
        return (1 - wr) * (1 - wp) * t.at(g, i, j) + wr * (1 - wp) * t.at(g, i + 1, j) +
               (1 - wr) * wp * t.at(g, i, j + 1) + wr * wp * t.at(g, i + 1, j + 1);
      };
      // clamped directions carry no variation
      const double h_r = rc == r ? interp(t.d_dr) : 0.0;
      const double h_psi = pc == psi ? interp(t.d_dpsi) : 0.0;
      Vec3 g = h_r * rhat;
      const double sin_psi = std::sin(psi);
      if (sin_psi > 1e-12) {
        // unit vector of increasing colatitude
        const Vec3 psi_hat = (rhat.z() * rhat - Vec3::UnitZ()) / sin_psi;
        g += (h_psi / r) * psi_hat;
      }
      return scale_ * g;
    }
  }
  return Vec3::Zero();
}

std::string CurvatureField::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  switch (family_) {
    case FieldFamily::constant: os << "(h0=" << c_ << ")"; break;
    case FieldFamily::radial: os << "(c=" << c_ << ")"; break;
    case FieldFamily::power: os << "(c=" << c_ << ", s=" << s_ << ")"; break;
    case FieldFamily::modulated: os << "(c=" << c_ << ", a=" << a_ << ")"; break;
    default: break;
  }
  if (scale_ != 1.0) os << "*" << scale_;
  return os.str();
}

Vec3 build_potential_Q(const CurvatureField& field, const Vec3& p) {
  if (field.family() == FieldFamily::zero) return Vec3::Zero();
  if (p.norm() < kDegenerateNorm && !field.defined_at_origin()) {
    throw FieldOutOfDomain("potential Q requested at the origin");
  }
  // t = tau^2 turns the power-law endpoint behaviour t^(1-s) into tau^(3-2s)
  auto integrand = [&](double tau) {
    const double t = tau * tau;
    return 2.0 * field.eval(t * p) * t * t * tau;
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, 1.0, 20, 1e-13, &error);
  if (!std::isfinite(value) || error > 1e-10) {
    throw QuadratureFailure("adaptive quadrature for Q did not reach 1e-10 (estimate " +
                            std::to_string(error) + ")");
  }
  return value * p;
}

double check_growth(const CurvatureField& field, double beta, std::span<const Vec3> samples) {
  const double bound = c_beta(beta);
  double margin = std::numeric_limits<double>::infinity();
  for (const Vec3& p : samples) {
    margin = std::min(margin, bound - std::abs(field.eval(p)) * p.norm());
  }
  return margin;
}

double check_monotonicity(const CurvatureField& field, std::span<const Vec3> samples) {
  double margin = std::numeric_limits<double>::infinity();
  for (const Vec3& p : samples) {
    margin = std::min(margin, field.eval(p) + field.grad(p).dot(p));
  }
  return margin;
}

}  // namespace hcone
