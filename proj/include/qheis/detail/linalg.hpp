#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>

namespace qheis::detail {

using Mat = Eigen::MatrixXcd;

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// ||M - M^*||_max relative to max(1, ||M||_max).
inline double hermitian_residual(const Mat& m) {
    return max_abs(m - m.adjoint()) / std::max(1.0, max_abs(m));
}

inline double unitarity_residual(const Mat& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(m.adjoint() * m - Mat::Identity(m.rows(), m.cols()));
}

inline bool is_unitary(const Mat& m, double tol = 1e-12) { return unitarity_residual(m) <= tol; }

/// Principal square root of a Hermitian positive semidefinite matrix.
inline Mat psd_sqrt(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

struct NullSpace {
    Mat basis;  // columns
    Eigen::VectorXd singular_values;
    double threshold = 0.0;
    Eigen::Index dim() const { return basis.cols(); }
};

/// Right null space of A via a full SVD; singular values below rel_tol * sigma_max count as zero.
inline NullSpace null_space(const Mat& a, double rel_tol = 1e-10) {
    NullSpace ns;
    const Eigen::Index n = a.cols();
    if (a.rows() == 0) {
        ns.basis = Mat::Identity(n, n);
        return ns;
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    ns.singular_values = svd.singularValues();
    const double smax = ns.singular_values.size() ? ns.singular_values[0] : 0.0;
    ns.threshold = rel_tol * std::max(1.0, smax);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < ns.singular_values.size(); ++k)
        if (ns.singular_values[k] > ns.threshold) ++rank;
    ns.basis = svd.matrixV().rightCols(n - rank);
    return ns;
}

/// Row-major vec: column index of entry (i, j) in an r x c unknown block.
inline Eigen::Index vec_index(Eigen::Index i, Eigen::Index j, Eigen::Index cols) { return i * cols + j; }

}  // namespace qheis::detail
