#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cxgeo {

using Complex = std::complex<double>;
/// A point or tangent vector in C^n.
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

}  // namespace cxgeo
