#include "cnls/operators.hpp"

#include "cnls/spectral.hpp"

namespace cnls {

BoxField laplacian(const BoxField& u) {
  require_finite(u, "laplacian");
  BoxField out = u;
  SpectralTransform fft(u.grid);
  const ArrayXr k2 = u.grid.squared_wavenumbers();
  for (auto& c : out.comps) {
    fft.forward(c);
    c *= (-k2).cast<Complex>();
    fft.inverse(c);
  }
  return out;
}

RadialLaplacianStencil radial_laplacian_stencil(const RadialGrid& grid) {
  const Eigen::Index n = grid.n_r;
  const Real h = grid.spacing();
  const Real area = unit_sphere_area(grid.dim);
  RadialLaplacianStencil st;
  st.lower = ArrayXr::Zero(n);
  st.diag = ArrayXr::Zero(n);
  st.upper = ArrayXr::Zero(n);
  // Conservative form: (Lap psi)_i = [rho_{i+1/2} (psi_{i+1} - psi_i)
  //   - rho_{i-1/2} (psi_i - psi_{i-1})] / (h w_i), rho_s = omega_N s^(N-1).
  // Zero flux through r = 0; Dirichlet ghost psi = 0 at distance h past R.
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real rho_minus =
        i == 0 ? 0.0 : area * std::pow(grid.r[i] - 0.5 * h, grid.dim - 1);
    const Real rho_plus =
        i == n - 1 ? area * std::pow(grid.radius, grid.dim - 1)
                   : area * std::pow(grid.r[i] + 0.5 * h, grid.dim - 1);
    const Real scale = 1.0 / (h * grid.w[i]);
    if (i > 0) st.lower[i] = rho_minus * scale;
    if (i < n - 1) st.upper[i] = rho_plus * scale;
    st.diag[i] = -(rho_minus + rho_plus) * scale;
  }
  return st;
}

RadialField laplacian(const RadialField& u) {
  require_finite(u, "laplacian");
  const auto st = radial_laplacian_stencil(u.grid);
  const Eigen::Index n = u.grid.n_r;
  RadialField out(u.grid, u.components());
  for (int j = 0; j < u.components(); ++j) {
    const ArrayXc& psi = u.comps[j];
    ArrayXc& res = out.comps[j];
    res[0] = st.diag[0] * psi[0] + st.upper[0] * psi[1];
    for (Eigen::Index i = 1; i < n - 1; ++i)
      res[i] = st.lower[i] * psi[i - 1] + st.diag[i] * psi[i] +
               st.upper[i] * psi[i + 1];
    res[n - 1] = st.lower[n - 1] * psi[n - 2] + st.diag[n - 1] * psi[n - 1];
  }
  return out;
}

ArrayXc radial_derivative(const RadialGrid& grid, const ArrayXc& psi) {
  const Eigen::Index n = grid.n_r;
  const Real h = grid.spacing();
  ArrayXc d(n);
  d[0] = Complex(0, 0);  // regularity: psi'(0) = 0
  for (Eigen::Index i = 1; i < n - 1; ++i)
    d[i] = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
  d[n - 1] = (psi[n - 1] - psi[n - 2]) / h;
  return d;
}

Real integrate(const CartesianGrid& grid, const ArrayXr& values) {
  return grid.cell_volume() * values.sum();
}

Real integrate(const RadialGrid& grid, const ArrayXr& values) {
  return (grid.w * values).sum();
}

InnerProducts inner_products(const BoxField& u) {
  require_finite(u, "inner_products");
  const int m = u.components();
  InnerProducts out{ArrayXr::Zero(m), ArrayXr::Zero(m)};
  SpectralTransform fft(u.grid);
  const ArrayXr k2 = u.grid.squared_wavenumbers();
  const Real cell = u.grid.cell_volume();
  const Real inv_total = 1.0 / static_cast<Real>(u.grid.size());
  for (int j = 0; j < m; ++j) {
    out.mass[j] = cell * u.comps[j].abs2().sum();
    ArrayXc spec = u.comps[j];
    fft.forward(spec);
    // Parseval: sum_x |u|^2 = (1/n^N) sum_k |u_hat|^2
    out.grad[j] = cell * inv_total * (k2 * spec.abs2()).sum();
  }
  return out;
}

InnerProducts inner_products(const RadialField& u) {
  require_finite(u, "inner_products");
  const int m = u.components();
  InnerProducts out{ArrayXr::Zero(m), ArrayXr::Zero(m)};
  for (int j = 0; j < m; ++j) {
    out.mass[j] = integrate(u.grid, u.comps[j].abs2());
    const ArrayXc d = radial_derivative(u.grid, u.comps[j]);
    out.grad[j] = integrate(u.grid, d.abs2());
  }
  return out;
}

}  // namespace cnls
