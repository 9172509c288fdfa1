#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hcone/config.hpp"

namespace hcone {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitPass = 0,
  kExitConfig = 2,        // ConfigInvalid, IoError, invalid input curve
  kExitSolver = 3,        // NoConvergence and other numerical failures
  kExitVerification = 4,  // a check failed, or the domain is not beta-convex
};

/// Maps an exception escaping a run_* function onto its exit code.
int exit_code_for(const std::exception& e);

struct RunResult {
  int exit_code = kExitPass;
  nlohmann::json report;
  std::vector<std::filesystem::path> artifacts;
};

/// Solves and writes surface.obj, surface.json (the reloadable state) and
/// solve.json into config.output.dir, which must already exist.
/// Throws NotBetaConvexAt before solving when the domain fails the check.
RunResult run_solve(const RunConfig& config);

/// Verifies the surface stored at `surface` (as written by run_solve), or
/// solves first when no path is given. Writes verify.json and radial_graph.csv.
RunResult run_verify(const RunConfig& config,
                     const std::optional<std::filesystem::path>& surface = std::nullopt);

/// Beta-convexity, convexity and orientation of the boundary domain -> domain.json.
RunResult run_check_domain(const RunConfig& config);

/// Smoothed-cone profiles for each configured eps -> profile.csv, profile.json.
RunResult run_profile_cone(const RunConfig& config);

// Building blocks, exposed for tests.
RadialGraphCurve make_curve(const RunConfig& config);
SurfaceState solve_configured(const RunConfig& config, std::vector<ReparamSweep>* sweeps = nullptr);
nlohmann::json surface_to_json(const SurfaceState& state);
SurfaceState surface_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const VerificationReport& report);
/// "v x y z" and "f i j k" records, 1-based, counter-clockwise in the disk.
void write_obj(const SurfaceState& state, const std::filesystem::path& path);

}  // namespace hcone
