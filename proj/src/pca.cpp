#include "lmar/pca.hpp"

#include <cmath>

#include "lmar/errors.hpp"

namespace lmar {

PcaBasis pca_fit(const std::vector<Eigen::Vector3d>& points) {
    const std::size_t n = points.size();
    if (n < 4) {
        throw SeriesTooShortError("principal components need at least 4 points");
    }
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& x : points) {
        if (!x.allFinite()) {
            throw InvalidArgumentError("points must be finite");
        }
        mean += x;
    }
    mean /= static_cast<double>(n);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& x : points) {
        const Eigen::Vector3d c = x - mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw SingularMatrixError("eigendecomposition of the covariance failed");
    }
    if (!(eig.eigenvalues().maxCoeff() > 0.0)) {
        throw SingularMatrixError("degenerate covariance: no varying direction");
    }

    PcaBasis basis;
    basis.mean = mean;
    // Eigen returns ascending eigenvalues; reverse to descending.
    for (int c = 0; c < 3; ++c) {
        Eigen::Vector3d v = eig.eigenvectors().col(2 - c);
        int arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0.0) v = -v;
        basis.components.row(c) = v.transpose();
        basis.explained_variance[c] = std::max(eig.eigenvalues()[2 - c], 0.0);
    }
    return basis;
}

Eigen::MatrixX3d pca_project(const PcaBasis& basis,
                             const std::vector<Eigen::Vector3d>& points) {
    Eigen::MatrixX3d scores(points.size(), 3);
    for (std::size_t r = 0; r < points.size(); ++r) {
        scores.row(r) = (basis.components * (points[r] - basis.mean)).transpose();
    }
    return scores;
}

std::vector<Eigen::Vector3d> pca_reconstruct(const PcaBasis& basis,
                                             const Eigen::MatrixX3d& scores) {
    std::vector<Eigen::Vector3d> points(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        points[static_cast<std::size_t>(r)] =
            pca_reconstruct_point(basis, scores.row(r).transpose());
    }
    return points;
}

Eigen::Vector3d pca_reconstruct_point(const PcaBasis& basis,
                                      const Eigen::Vector3d& scores) {
    return basis.mean + basis.components.transpose() * scores;
}

}  // namespace lmar
