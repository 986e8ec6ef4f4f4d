#pragma once

#include <Eigen/Dense>
#include <complex>

namespace netres {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using complex = std::complex<double>;

}  // namespace netres
