#ifndef CNLS_RANDOM_FIELDS_HPP_
#define CNLS_RANDOM_FIELDS_HPP_

#include <cstdint>
#include <random>

#include "cnls/field.hpp"

namespace cnls {

/**
 * Deterministic corpus of localized complex test fields: per component a
 * sum of modulated Gaussian bumps
 *
 *   u_j(x) = sum_b A_b e^(i theta_b) e^(i k_b . x) e^(-|x - c_b|^2 / (2 s_b^2)).
 *
 * Centers, widths and modulation wavenumbers are constrained so that the
 * fields stay well inside the domain and well resolved on the grid.
 */
struct FieldEnsembleOptions {
  int bumps = 3;
  Real max_center = 2.0;
  Real min_width = 0.8;
  Real max_width = 1.6;
  Real max_amplitude = 1.0;
  Real max_mod_wavenumber = 1.5;
};

class FieldEnsemble {
 public:
  explicit FieldEnsemble(std::uint64_t seed, FieldEnsembleOptions opts = {})
      : rng_(seed), opts_(opts) {}

  BoxField next(const CartesianGrid& grid, int m);
  RadialField next(const RadialGrid& grid, int m);

 private:
  std::mt19937_64 rng_;
  FieldEnsembleOptions opts_;
};

}  // namespace cnls

#endif  // CNLS_RANDOM_FIELDS_HPP_
