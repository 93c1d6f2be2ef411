#pragma once

#include <Eigen/Dense>

namespace lmar {

/// The single model parameter: a (p+1)x(p+1) symmetric positive-definite
/// covariance over length-(p+1) window differences. Construction symmetrizes
/// the input as (S + S')/2 and rejects matrices that are asymmetric beyond
/// 1e-10 relative.
class MixtureParam {
public:
    explicit MixtureParam(const Eigen::MatrixXd& sigma);

    int p() const { return static_cast<int>(sigma_.rows()) - 1; }
    const Eigen::MatrixXd& matrix() const { return sigma_; }

    /// Upper-left p x p block.
    Eigen::MatrixXd block11() const { return sigma_.topLeftCorner(p(), p()); }
    /// Last column without the corner element.
    Eigen::VectorXd block12() const { return sigma_.topRightCorner(p(), 1); }
    /// Bottom-right corner element.
    double block22() const { return sigma_(p(), p()); }

private:
    Eigen::MatrixXd sigma_;
};

/// Autoregressive coefficients and innovation variance derived from the
/// covariance blocks: gamma solves block11 * gamma = block12, and
/// sigma2 = block22 - gamma . block12. gamma is stored in the component
/// order of the lag-difference vectors (oldest difference first).
struct DerivedParams {
    Eigen::VectorXd gamma;
    double sigma2 = 0.0;
};

/// Horizon-k partition of the covariance: the upper-left (p-k+1)x(p-k+1)
/// block, the first p-k+1 entries of the last column, and the corner element;
/// the rows/columns in between are dropped.
struct KPartition {
    Eigen::MatrixXd s11;
    Eigen::VectorXd s12;
    double s22 = 0.0;
    int k = 0;
};

/// Cholesky factorization with a single jitter retry: on failure, adds
/// (1e-10 * trace/dim) * I and tries once more, then reports
/// SingularMatrixError. `label` names the block in error messages.
Eigen::LLT<Eigen::MatrixXd> cholesky_spd(const Eigen::MatrixXd& block,
                                         const char* label);

DerivedParams derive_params(const MixtureParam& sigma);

KPartition partition_k(const MixtureParam& sigma, int k);

}  // namespace lmar
