#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "hcone/boundary.hpp"
#include "hcone/curvature_field.hpp"
#include "hcone/mesh.hpp"

namespace hcone {

struct SolveConfig {
  int max_iters = 400;            // Picard iterations per continuation step
  double relaxation = 0.5;        // damping lambda in (0, 1]
  double residual_tol = 1e-7;     // strong-form residual, relative to the curve scale
  double update_tol = 1e-11;      // max vertex update, relative to the curve scale
  int continuation_steps = 4;
  bool reparam_enabled = false;
  int reparam_sweeps = 40;

  /// Throws OutOfRange for non-positive tolerances or counts.
  void validate() const;
};

struct IterationRecord {
  int step = 0;
  int iteration = 0;
  double field_scale = 0.0;
  double update = 0.0;
  double residual = 0.0;
};

struct SurfaceState {
  std::shared_ptr<const DiskMesh> mesh;
  std::vector<Vec3> X;
  /// Curve parameter of each boundary vertex, in mesh.boundary order.
  std::vector<double> theta;
  std::array<int, 3> pinned{0, 0, 0};  // positions in mesh.boundary
  int iterations = 0;
  double residual = 0.0;
  double last_update = 0.0;
  double scale = 1.0;
  bool converged = false;
  std::vector<IterationRecord> log;
};

/// Sparse P1 Laplace system on a fixed mesh. The interior block is factored
/// once and reused for every Picard step.
class Solver {
 public:
  explicit Solver(std::shared_ptr<const DiskMesh> mesh);

  const DiskMesh& mesh() const { return *mesh_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const std::vector<double>& lumped_mass() const { return lumped_mass_; }

  /// Solves Delta X = 2 H(X) X_u ^ X_v with X = curve(theta) on the boundary.
  /// theta defaults to arclength parameters; warm_start to the harmonic extension.
  SurfaceState solve(const RadialGraphCurve& curve, const CurvatureField& field,
                     const SolveConfig& config, const std::vector<double>* theta = nullptr,
                     const std::vector<Vec3>* warm_start = nullptr) const;

  /// Harmonic extension of the given boundary values (the H = 0 solve).
  std::vector<Vec3> harmonic_extension(const std::vector<Vec3>& boundary_values) const;

  /// K X + F with F_i = sum over triangles of 2 H(X_c) (X_u ^ X_v) area / 3:
  /// the gradient of the discrete energy with respect to vertex positions.
  std::vector<Vec3> energy_gradient(const std::vector<Vec3>& X, const CurvatureField& field) const;

  /// Total derivative of a functional J(X) with respect to the boundary
  /// values when the interior follows the harmonic response:
  /// dJ/dX_B - K_BI K_II^-1 dJ/dX_I, returned in mesh.boundary order.
  std::vector<Vec3> boundary_sensitivity(const std::vector<Vec3>& dJ_dX) const;

  /// max over interior vertices of |K X + F| / lumped mass.
  double strong_residual(const std::vector<Vec3>& X, const CurvatureField& field) const;

 private:
  struct Factor;
  std::shared_ptr<const DiskMesh> mesh_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::SparseMatrix<double> k_ib_;
  std::vector<double> lumped_mass_;
  std::vector<int> interior_;        // interior vertex ids
  std::vector<int> interior_index_;  // vertex id -> interior slot or -1
  std::shared_ptr<Factor> factor_;
};

SurfaceState solve(std::shared_ptr<const DiskMesh> mesh, const RadialGraphCurve& curve,
                   const CurvatureField& field, const SolveConfig& config);

/// F = 1/2 sum w (|X_u|^2 + |X_v|^2) + 2 sum w Q(X_c) . (X_u ^ X_v), with w the
/// disk quadrature weights of the mesh.
double energy_F(const SurfaceState& state, const CurvatureField& field);
/// G = sum w |X_u ^ X_v| + 2 sum w Q(X_c) . (X_u ^ X_v).
double energy_G(const SurfaceState& state, const CurvatureField& field);

/// Per-triangle (||X_u|^2 - |X_v|^2| + 2|X_u . X_v|) / max(|X_u|^2, floor),
/// floor = 1e-14 median(|X_u|^2).
std::vector<double> triangle_defects(const SurfaceState& state);
double conformality_defect(const SurfaceState& state);
/// sum area (a^2 + 4 b^2) / (sum area E)^2 with a = |X_u|^2 - |X_v|^2, b = X_u . X_v
/// and E = (|X_u|^2 + |X_v|^2) / 2. Scale invariant; zero iff conformal.
double integrated_defect(const SurfaceState& state);
/// Gradient of integrated_defect with respect to every vertex position.
std::vector<Vec3> integrated_defect_gradient(const SurfaceState& state);

struct ReparamSweep {
  double energy = 0.0;
  double integrated_defect = 0.0;
  double max_defect = 0.0;
  double step = 0.0;
};

struct ReparamResult {
  SurfaceState state;
  std::vector<ReparamSweep> sweeps;  // sweeps[0] is the starting state
};

/// Descent on the free boundary parameters (three stay pinned) for the
/// integrated conformality defect. The search direction is the smoothed
/// defect gradient through the harmonic response of the interior; a step is
/// accepted only if the defect decreases and the discrete energy does not
/// grow beyond a relative slack. theta stays strictly increasing.
ReparamResult reparametrize_boundary(const SurfaceState& state, const RadialGraphCurve& curve,
                                     const CurvatureField& field, const SolveConfig& config,
                                     int sweeps, double energy_slack = 1e-9);

}  // namespace hcone
