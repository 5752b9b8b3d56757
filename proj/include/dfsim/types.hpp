#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dfsim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<cplx>;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace dfsim
