#ifndef CNLS_TYPES_HPP_
#define CNLS_TYPES_HPP_

#include <complex>

#include <Eigen/Dense>

namespace cnls {

using Real = double;
using Complex = std::complex<Real>;

using ArrayXr = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;
using MatrixXr = Eigen::MatrixXd;
using VectorXr = Eigen::VectorXd;

template <typename Scalar>
using DynamicArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

}  // namespace cnls

#endif  // CNLS_TYPES_HPP_
