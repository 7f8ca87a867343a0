#pragma once

#include <Eigen/Dense>

namespace roughdense {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Norm convention across the project: Euclidean norm for vectors, spectral
// (operator-2) norm for matrices. The skew-exponential contraction only holds
// for the spectral norm.
double spectral_norm(const Mat& a);
double min_singular_value(const Mat& a);
double lambda_min_symmetric(const Mat& a);

/// Matrix exponential (scaling-and-squaring, Pade 13).
Mat expm(const Mat& a);

bool is_skew(const Mat& a, double tol = 1e-12);

}  // namespace roughdense
