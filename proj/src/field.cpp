#include "cnls/field.hpp"

#include <array>

namespace cnls {

BoxField sample_box(const CartesianGrid& grid, int m,
                    const std::function<Complex(int, const Real*)>& f) {
  BoxField u(grid, m);
  const Eigen::Index total = grid.size();
  std::array<Real, 8> x{};
  for (int j = 0; j < m; ++j)
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      grid.node_coords(idx, x.data());
      u.comps[j][idx] = f(j, x.data());
    }
  return u;
}

RadialField sample_radial(const RadialGrid& grid, int m,
                          const std::function<Complex(int, Real)>& f) {
  RadialField u(grid, m);
  for (int j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < grid.n_r; ++i) u.comps[j][i] = f(j, grid.r[i]);
  return u;
}

}  // namespace cnls
