#include "roughdense/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace roughdense {

double spectral_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    return a.jacobiSvd().singularValues()(0);
}

double min_singular_value(const Mat& a) {
    if (a.size() == 0) return 0.0;
    auto sv = a.jacobiSvd().singularValues();
    return sv(sv.size() - 1);
}

double lambda_min_symmetric(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    return es.eigenvalues()(0);
}

Mat expm(const Mat& a) { return a.exp(); }

bool is_skew(const Mat& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a + a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace roughdense
