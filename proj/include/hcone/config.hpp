#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcone/boundary.hpp"
#include "hcone/curvature_field.hpp"
#include "hcone/solver.hpp"
#include "hcone/verifier.hpp"

namespace hcone {

struct ConeBlock {
  double beta = 0.0;
  std::optional<double> delta;  // default: select_delta(beta, grid_step)
  double grid_step = 1e-3;
  std::vector<double> eps{0.1, 0.05, 0.025};
  int samples = 512;  // profile samples on the cap branch
};

struct BoundaryBlock {
  SphericalBoundary domain = SphericalBoundary::cap(0.5);
  FourierSeries g = FourierSeries::constant(1.0);
};

struct MeshBlock {
  int n_r = 16;
  int n_theta = 64;
};

struct OutputBlock {
  std::filesystem::path dir = ".";
  bool obj = true;
  bool json = true;
  bool csv = true;
};

/// Everything a CLI run needs. Built from JSON by parse_config, which also
/// validates; a RunConfig obtained that way is always usable.
struct RunConfig {
  ConeBlock cone;
  CurvatureField field = CurvatureField::zero();
  BoundaryBlock boundary;
  MeshBlock mesh;
  SolveConfig solver;
  VerifyConfig verify;
  OutputBlock output;

  void validate() const;
};

/// Throws ConfigInvalid with the offending key on any schema or range error.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

CurvatureField parse_field(const nlohmann::json& j, double beta);

}  // namespace hcone
