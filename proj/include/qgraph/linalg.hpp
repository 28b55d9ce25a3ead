#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qgraph/errors.hpp"

namespace qgraph {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Reciprocal condition number below which a matrix is treated as singular.
inline constexpr double kMinRcond = 1e-12;

/// Solves A X = B with partial-pivot LU. Throws PoleError(kind, k) when A is
/// singular or its estimated reciprocal condition number is below kMinRcond.
CMatrix guarded_solve(const CMatrix& a, const CMatrix& b, PoleError::Kind kind, Complex k);

/// All-ones d x d matrix.
CMatrix ones(Eigen::Index d);

/// max |U^H U - I|
double unitarity_defect(const CMatrix& u);

}  // namespace qgraph
