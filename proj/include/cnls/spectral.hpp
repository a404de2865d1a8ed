#ifndef CNLS_SPECTRAL_HPP_
#define CNLS_SPECTRAL_HPP_

#include <unsupported/Eigen/FFT>

#include "cnls/grid.hpp"
#include "cnls/types.hpp"

namespace cnls {

/**
 * In-place N-dimensional complex FFT on flattened row-major data,
 * implemented as successive 1-D transforms along each axis.
 *
 * forward() applies the unnormalized DFT, inverse() includes the 1/n^N
 * factor, so inverse(forward(u)) == u up to rounding.
 */
class SpectralTransform {
 public:
  explicit SpectralTransform(const CartesianGrid& grid);

  void forward(ArrayXc& data) const;
  void inverse(ArrayXc& data) const;

 private:
  void transform_axis(ArrayXc& data, int axis, bool fwd) const;

  int dim_;
  int n_;
  Eigen::Index total_;
  mutable Eigen::FFT<Real> fft_;
  mutable Eigen::VectorXcd line_, spec_;
};

}  // namespace cnls

#endif  // CNLS_SPECTRAL_HPP_
