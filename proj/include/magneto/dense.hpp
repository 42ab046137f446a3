#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace magneto {

using Index = std::ptrdiff_t;
using Complex = std::complex<double>;

// Row-major so that sparse row products stream over contiguous feature rows.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace magneto
