#pragma once

#include <complex>

#include <Eigen/Dense>

namespace prodlaw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

}  // namespace prodlaw
