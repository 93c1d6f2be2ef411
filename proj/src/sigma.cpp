#include "lmar/sigma.hpp"

#include <string>

#include "lmar/errors.hpp"

namespace lmar {

MixtureParam::MixtureParam(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 2) {
        throw ShapeError("covariance must be square with dimension >= 2");
    }
    const double scale = sigma.cwiseAbs().maxCoeff();
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-10 * scale) {
        throw ShapeError("covariance is asymmetric beyond 1e-10 relative");
    }
    if (!sigma.allFinite()) {
        throw ShapeError("covariance entries must be finite");
    }
    sigma_ = 0.5 * (sigma + sigma.transpose());
}

Eigen::LLT<Eigen::MatrixXd> cholesky_spd(const Eigen::MatrixXd& block,
                                         const char* label) {
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() == Eigen::Success) {
        return llt;
    }
    const double dim = static_cast<double>(block.rows());
    const double eps = 1e-10 * block.trace() / dim;
    if (eps > 0.0) {
        Eigen::MatrixXd jittered = block;
        jittered.diagonal().array() += eps;
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) {
            return llt;
        }
    }
    throw SingularMatrixError(std::string(label) +
                              " is not positive definite (jitter retry failed)");
}

DerivedParams derive_params(const MixtureParam& sigma) {
    const Eigen::MatrixXd s11 = sigma.block11();
    const Eigen::VectorXd s12 = sigma.block12();
    const auto llt = cholesky_spd(s11, "leading covariance block");
    DerivedParams out;
    out.gamma = llt.solve(s12);
    out.sigma2 = sigma.block22() - out.gamma.dot(s12);
    if (!(out.sigma2 > 0.0)) {
        throw SingularMatrixError(
            "innovation variance is not positive; covariance is singular");
    }
    return out;
}

KPartition partition_k(const MixtureParam& sigma, int k) {
    const int p = sigma.p();
    if (k < 1 || k > p) {
        throw HorizonError("horizon k = " + std::to_string(k) +
                           " outside valid range [1, " + std::to_string(p) + "]");
    }
    const int head = p - k + 1;
    KPartition part;
    part.k = k;
    part.s11 = sigma.matrix().topLeftCorner(head, head);
    part.s12 = sigma.matrix().topRightCorner(head, 1);
    part.s22 = sigma.block22();
    return part;
}

}  // namespace lmar
