#include "hcone/jets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hcone {

namespace {

// Stencil radius in units of the local spacing and the minimum point count
// for a well-posed cubic fit.
constexpr double kStencilRadius = 3.0;
constexpr std::size_t kMinPoints = 20;

}  // namespace

JetFitter::JetFitter(const DiskMesh& mesh) {
  const int n = mesh.num_vertices();
  stencil_.resize(n);
  operator_.resize(n);
  for (int v = 0; v < n; ++v) {
    // Disk-shaped stencil sized by the coarser of the radial and angular
    // spacing; near the center this gathers whole rings instead of a thin wedge.
    const Vec2 o = mesh.uv[v];
    const double spacing = std::max(mesh.radial_spacing(),
                                    2.0 * std::numbers::pi * o.norm() / mesh.n_theta);
    double h = kStencilRadius * spacing;
    std::vector<int> nb;
    while (true) {
      nb.assign(1, v);
      const int reach = static_cast<int>(std::ceil(h / mesh.radial_spacing())) + 1;
      const int lo = std::max(0, mesh.ring_of(v) - reach);
      const int hi = std::min(mesh.n_r, mesh.ring_of(v) + reach);
      const int first = lo == 0 ? 0 : mesh.vertex(lo, 0);
      const int last = mesh.vertex(hi, mesh.n_theta - 1);
      for (int a = first; a <= last; ++a) {
        if (a != v && (mesh.uv[a] - o).norm() <= h) nb.push_back(a);
      }
      if (nb.size() >= kMinPoints) break;
      h *= 1.25;
    }
    Eigen::MatrixXd A(nb.size(), 10);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double x = (mesh.uv[nb[k]].x() - o.x()) / h;
      const double y = (mesh.uv[nb[k]].y() - o.y()) / h;
      A.row(k) << 1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y, x * x * x, x * x * y, x * y * y, y * y * y;
    }
    // Taylor basis: the first six pseudo-inverse rows are the value and the
    // derivatives up to second order once the 1/h scaling is undone. The cubic
    // terms only absorb truncation error.
    Eigen::MatrixXd pinv = A.completeOrthogonalDecomposition().pseudoInverse().topRows(6);
    const double s[6] = {1.0, 1.0 / h, 1.0 / h, 1.0 / (h * h), 1.0 / (h * h), 1.0 / (h * h)};
    for (int r = 0; r < 6; ++r) pinv.row(r) *= s[r];
    stencil_[v] = std::move(nb);
    operator_[v] = std::move(pinv);
  }
}

bool JetFitter::touches_pole(int v) const {
  const auto& nb = stencil_[v];
  return std::find(nb.begin(), nb.end(), 0) != nb.end();
}

}  // namespace hcone
