#pragma once

#include <string>
#include <vector>

#include "hcone/boundary.hpp"
#include "hcone/curvature_field.hpp"
#include "hcone/jets.hpp"
#include "hcone/solver.hpp"

namespace hcone {

/// Unit normals per triangle (affine derivatives) and per vertex (quadratic
/// jets). Entries whose conformal factor falls below tau_b * median are
/// flagged undefined: candidate branch points.
struct NormalField {
  std::vector<Vec3> triangle;
  std::vector<char> triangle_defined;
  std::vector<Vec3> vertex;
  std::vector<char> vertex_defined;
  std::vector<int> branch_triangles;
  double median_E = 0.0;
  double tau_b = 1e-6;
};

NormalField gauss_map(const SurfaceState& state, double tau_b = 1e-6);

/// p = E (2 H^2 - K - grad H . N) per vertex, E = (|X_u|^2 + |X_v|^2) / 2.
/// Undefined vertices (branch candidates) carry p = 0.
struct DensityField {
  std::vector<double> p;
  std::vector<double> E;
  std::vector<double> K;
  std::vector<double> gradH_dot_N;
  std::vector<char> defined;
};

DensityField density_field(const SurfaceState& state, const CurvatureField& field,
                           const NormalField& normals);

struct StabilityResult {
  double mu1 = 0.0;
  int iterations = 0;
  double shift = 0.0;
};

/// Smallest eigenvalue of (K - 2 M_p) phi = mu M phi on interior vertices,
/// with M the consistent mass matrix and M_p the mass matrix weighted by the
/// piecewise-linear interpolant of p. Shifted inverse iteration; throws
/// EigensolverFailure when it does not settle.
StabilityResult stability_eigenvalue(const DiskMesh& mesh, const std::vector<double>& p,
                                     double tol = 1e-12, int max_iter = 1000);
StabilityResult stability_eigenvalue(const SurfaceState& state, const DensityField& density);

/// Residual of a PDE identity over the regular interior vertices: off the
/// boundary ring and with a jet stencil clear of the mesh pole.
struct ResidualNorm {
  double rms = 0.0;        // lumped-mass weighted
  double max = 0.0;
  double reference = 0.0;  // rms of the dominant term, for relative comparison
  double relative() const { return reference > 0.0 ? rms / reference : rms; }
};

/// Delta N + 2 p N + 2 E grad H(X).
ResidualNorm normal_equation_residual(const SurfaceState& state, const CurvatureField& field,
                                      const NormalField& normals, const DensityField& density);

struct EnclosureMargins {
  double min_boundary_phi = 0.0;
  double min_interior_phi = 0.0;
  ResidualNorm identity_residual;  // -Delta phi against its closed form
};

/// phi = X . e3 - |X| cos(beta). Throws OriginHit when |X| < 1e-10 somewhere.
EnclosureMargins check_enclosure(const SurfaceState& state, const CurvatureField& field,
                                 double beta);

struct ConeConditionMargins {
  double min_interior = 0.0;            // min over axes and interior vertices of phi_p
  double max_normal_derivative = 0.0;   // max over axes of d phi_p / d nu at p
  std::vector<double> interior_minima;  // per axis
  std::vector<double> normal_derivatives;
  int n_axes = 0;
};

/// phi_p = X . p0 - |X| cos(beta) for the beta-cone axes p0 at n_axes boundary vertices.
ConeConditionMargins check_cone_condition_functions(const SurfaceState& state,
                                                    const SphericalBoundary& boundary,
                                                    double beta, int n_axes,
                                                    int n_domain = 2048);

struct RadialNormalMargins {
  double min_closure = 0.0;        // min N . X over all vertices
  double min_abs_boundary = 0.0;   // min |N . X| over the boundary ring
  ResidualNorm residual;           // Delta f + 2 p f + 2 E (grad H . X + H), f = N . X
};

RadialNormalMargins check_radial_normal(const SurfaceState& state, const CurvatureField& field,
                                        const DensityField& density, const NormalField& normals);

/// Winding number of the stereographic image of P X(boundary) around probe
/// points taken from the inner half of the mesh, after rotating the centroid
/// of P X(boundary) to the north pole. Throws InconsistentDegree when probes disagree.
int projection_degree(const SurfaceState& state, int n_probe);

/// max over triangles of |(PX)_u ^ (PX)_v . PX - (X_u ^ X_v . X)/|X|^3|,
/// relative to the largest right-hand side.
double jacobian_identity_check(const SurfaceState& state);

struct RadialGraph {
  std::vector<UnitVec> points;
  std::vector<double> lambda;
  std::vector<int> triangle;  // containing triangle per point
  int edge_hits = 0;          // points resolved by the tolerance tie-break
};

/// Locates every grid direction in the spherical image P X of the mesh and
/// returns lambda(p) = |X(F(p))| from the exact ray / triangle-plane distance.
/// Throws NotInjectiveAt when a point is covered more than once, Uncovered when never.
RadialGraph extract_radial_graph(const SurfaceState& state, const std::vector<UnitVec>& grid);

/// Exactly n directions strictly inside the domain: the pole plus concentric
/// rings out to `shrink` times the boundary colatitude.
std::vector<UnitVec> interior_grid(const SphericalBoundary& boundary, int n, double shrink = 0.9);

struct VerifyConfig {
  double tau_b = 1e-6;
  int n_axes = 16;
  int n_probe = 32;
  int grid_points = 512;
  double grid_shrink = 0.9;
  double stability_tol_rel = 1e-3;  // mu1 >= -tol * median(E)
  double defect_tol = 0.25;
  double jacobian_tol = 0.25;
  double residual_tol = 0.25;       // relative residuals of the PDE identities
  int n_boundary = 256;
  int n_domain = 2048;

  void validate() const;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string units;
  std::string note;
};

struct VerificationReport {
  std::vector<Check> checks;
  int degree = 0;
  bool injective = false;
  std::vector<int> branch_triangles;
  RadialGraph graph;
  double mu1 = 0.0;

  bool pass() const;
  const Check* find(const std::string& name) const;
};

VerificationReport verify(const SurfaceState& state, const RadialGraphCurve& curve,
                          const CurvatureField& field, double beta, const VerifyConfig& config);

}  // namespace hcone
