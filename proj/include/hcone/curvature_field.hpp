#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hcone/geometry.hpp"

namespace hcone {

enum class FieldFamily { zero, constant, radial, power, modulated, tabulated };

std::string to_string(FieldFamily family);

/// Axially symmetric table of H over (|p|, colatitude from e3).
///
/// Values outside the table are clamped: the colatitude to the last column
/// (the cone boundary) and |p| to the radial band. Every clamped evaluation is
/// counted so reports can flag that the extension was used.
struct FieldTable {
  std::vector<double> radii;        // strictly increasing, > 0
  std::vector<double> colatitudes;  // strictly increasing, in [0, pi/2)
  std::vector<double> values;       // row-major: values[i * colatitudes.size() + j]
};

/// Prescribed mean curvature H(p) together with its gradient.
///
/// Builtin families are closed-form and defined on R^3 \ {0}:
///   zero, constant(h0), radial(c) = c/|p|, power(c, s) = c/|p|^(1+s),
///   modulated(c, a) = (c + a p.e3/|p|) / |p|.
/// Fields are immutable; scaled() returns a copy used for continuation.
class CurvatureField {
 public:
  static CurvatureField zero();
  static CurvatureField constant(double h0);
  static CurvatureField radial(double c);
  static CurvatureField power(double c, double s);
  static CurvatureField modulated(double c, double a);
  static CurvatureField tabulated(FieldTable table);

  double eval(const Vec3& p) const;
  Vec3 grad(const Vec3& p) const;

  FieldFamily family() const noexcept { return family_; }
  double c() const noexcept { return c_; }
  double s() const noexcept { return s_; }
  double a() const noexcept { return a_; }
  double scale() const noexcept { return scale_; }
  bool defined_at_origin() const noexcept {
    return family_ == FieldFamily::zero || family_ == FieldFamily::constant;
  }

  /// Copy with H multiplied by factor.
  CurvatureField scaled(double factor) const;

  /// Number of evaluations that fell outside a tabulated field's grid.
  long clamped_evaluations() const;

  std::string describe() const;

 private:
  struct Table;

  FieldFamily family_ = FieldFamily::zero;
  double c_ = 0.0;
  double s_ = 0.0;
  double a_ = 0.0;
  double scale_ = 1.0;
  std::shared_ptr<const Table> table_;
};

/// Q(p) = (int_0^1 H(tp) t^2 dt) p, whose divergence is H.
/// Throws QuadratureFailure when the adaptive rule misses 1e-10 absolute.
Vec3 build_potential_Q(const CurvatureField& field, const Vec3& p);

/// min over samples of c_beta - |H(p)||p|; nonnegative iff the growth bound holds there.
double check_growth(const CurvatureField& field, double beta, std::span<const Vec3> samples);

/// min over samples of H(p) + grad H(p) . p = d/dl [l H(l p)] at l = 1.
double check_monotonicity(const CurvatureField& field, std::span<const Vec3> samples);

}  // namespace hcone
