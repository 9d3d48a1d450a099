#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "ringgesn/errors.hpp"
#include "ringgesn/matrix.hpp"

namespace ringgesn {

namespace detail {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const RowMajor> view(const DenseMatrix& m) {
    return {m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return out;
}

}  // namespace detail

/// Tikhonov-regularized normal equations W (G + beta I) = C with the
/// symmetric factorization of G computed once and reused for every beta.
///
/// G = Z Z^T is D x D, C = Y Z^T is N_O x D.
class RidgeSystem {
public:
    RidgeSystem(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& cross) : cross_(cross) {
        if (gram.rows() != gram.cols() || gram.cols() != cross.cols())
            throw DimensionError("RidgeSystem: gram must be D x D and cross N_O x D");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        if (eig.info() != Eigen::Success) throw SolverError("ridge: eigendecomposition failed");
        basis_ = eig.eigenvectors();
        // G is positive semidefinite; tiny negative values are rounding noise.
        eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
        projected_ = cross_ * basis_;
        const double top = eigenvalues_.size() ? eigenvalues_.maxCoeff() : 0.0;
        singular_floor_ = static_cast<double>(gram.rows()) *
                          std::numeric_limits<double>::epsilon() * std::max(top, 1.0);
    }

    /// Builds the system from features Z (D x M) and targets Y (N_O x M).
    static RidgeSystem from_data(const DenseMatrix& features, const DenseMatrix& targets) {
        if (features.cols() == 0) throw DimensionError("ridge: no samples");
        if (features.cols() != targets.cols())
            throw DimensionError("ridge: features and targets have different sample counts");
        const auto z = detail::view(features);
        const auto y = detail::view(targets);
        Eigen::MatrixXd gram = z * z.transpose();
        Eigen::MatrixXd cross = y * z.transpose();
        return RidgeSystem(gram, cross);
    }

    Eigen::Index dim() const noexcept { return basis_.rows(); }
    Eigen::Index outputs() const noexcept { return cross_.rows(); }

    /// Readout weights N_O x D for regularizer `beta`.
    Eigen::MatrixXd solve_eigen(double beta) const {
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw SolverError("ridge: beta must be finite and >= 0");
        const Eigen::VectorXd shifted = eigenvalues_.array() + beta;
        if (beta == 0.0 && shifted.minCoeff() <= singular_floor_)
            throw SolverError("ridge: singular normal equations with beta = 0; use beta > 0");
        Eigen::MatrixXd scaled = projected_ * shifted.cwiseInverse().asDiagonal();
        return scaled * basis_.transpose();
    }

    DenseMatrix solve(double beta) const { return detail::from_eigen(solve_eigen(beta)); }

private:
    Eigen::MatrixXd cross_;
    Eigen::MatrixXd basis_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd projected_;
    double singular_floor_ = 0.0;
};

/// Closed-form ridge regression: returns W_o = Y Z^T (Z Z^T + beta I)^-1.
inline DenseMatrix ridge_solve(const DenseMatrix& features, const DenseMatrix& targets,
                               double beta) {
    return RidgeSystem::from_data(features, targets).solve(beta);
}

}  // namespace ringgesn
