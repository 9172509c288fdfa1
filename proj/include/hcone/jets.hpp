#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "hcone/mesh.hpp"

namespace hcone {

/// Local cubic fits of vertex fields over (u,v). Each vertex uses the
/// vertices within a small disk around it, sized by the local mesh spacing;
/// the least-squares operators are precomputed, so a jet is a fixed linear
/// combination of neighbour values.
class JetFitter {
 public:
  explicit JetFitter(const DiskMesh& mesh);

  /// Coefficients (f, f_u, f_v, f_uu, f_uv, f_vv) at vertex v.
  template <class V>
  std::array<V, 6> jet(int v, const std::vector<V>& f) const {
    const auto& nb = stencil_[v];
    const Eigen::MatrixXd& op = operator_[v];
    std::array<V, 6> out;
    for (int r = 0; r < 6; ++r) {
      V acc = op(r, 0) * f[nb[0]];
      for (std::size_t k = 1; k < nb.size(); ++k) acc += op(r, k) * f[nb[k]];
      out[r] = acc;
    }
    return out;
  }

  template <class V>
  V laplacian(int v, const std::vector<V>& f) const {
    const auto j = jet(v, f);
    return j[3] + j[5];
  }

  const std::vector<int>& stencil(int v) const { return stencil_[v]; }
  /// True when the stencil of v contains the center vertex. Near that pole of
  /// the polar mesh the P1 error is not smooth on the mesh scale, so
  /// third-derivative quantities are not consistent there.
  bool touches_pole(int v) const;

 private:
  std::vector<std::vector<int>> stencil_;
  std::vector<Eigen::MatrixXd> operator_;
};

}  // namespace hcone
