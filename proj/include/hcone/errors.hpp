#pragma once

#include <stdexcept>
#include <string>

namespace hcone {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes (see pipeline.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HCONE_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

HCONE_DEFINE_ERROR(DegenerateInput)
HCONE_DEFINE_ERROR(PoleSingularity)
HCONE_DEFINE_ERROR(OutOfRange)
HCONE_DEFINE_ERROR(PointOnCurve)
HCONE_DEFINE_ERROR(AxisSingularity)
HCONE_DEFINE_ERROR(QuadratureFailure)
HCONE_DEFINE_ERROR(SignChange)
HCONE_DEFINE_ERROR(CurveLeavesCone)
HCONE_DEFINE_ERROR(FieldOutOfDomain)
HCONE_DEFINE_ERROR(EigensolverFailure)
HCONE_DEFINE_ERROR(OriginHit)
HCONE_DEFINE_ERROR(InconsistentDegree)
HCONE_DEFINE_ERROR(Uncovered)
HCONE_DEFINE_ERROR(ConfigInvalid)
HCONE_DEFINE_ERROR(IoError)

#undef HCONE_DEFINE_ERROR

class NotBetaConvexAt : public Error {
 public:
  explicit NotBetaConvexAt(double theta)
      : Error("domain violates the beta-cone condition at theta=" + std::to_string(theta)),
        theta_(theta) {}
  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual)
      : Error("no convergence after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class NotInjectiveAt : public Error {
 public:
  NotInjectiveAt(int grid_index, int count)
      : Error("grid point " + std::to_string(grid_index) + " covered " + std::to_string(count) +
              " times"),
        grid_index_(grid_index),
        count_(count) {}
  int grid_index() const noexcept { return grid_index_; }
  int count() const noexcept { return count_; }

 private:
  int grid_index_;
  int count_;
};

}  // namespace hcone
