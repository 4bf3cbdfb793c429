#pragma once

#include <Eigen/Dense>

namespace formguard {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Kronecker product A ⊗ I_n.
Mat kron_identity(const Mat& a, int n);

/// Largest singular value (0 for an empty matrix).
double max_singular_value(const Mat& m);

/// Smallest singular value of a square matrix.
double min_singular_value(const Mat& m);

/// Stacks N vectors of equal dimension into one nN-vector.
Vec stack(const std::vector<Vec>& parts);

/// Splits an nN-vector into N blocks of dimension n.
std::vector<Vec> unstack(const Vec& stacked, int n);

}  // namespace formguard
