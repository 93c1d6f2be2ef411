#include "lmar/detail/windows.hpp"

#include <cmath>

#include "lmar/errors.hpp"

namespace lmar::detail {

TransformedWindows transform_windows(const TimeSeries& series, int q,
                                     std::int64_t end_limit,
                                     const Eigen::LLT<Eigen::MatrixXd>& llt,
                                     const Eigen::VectorXd* mean_vector) {
    TransformedWindows out;
    out.q = q;
    out.end0 = series.first_index() + q - 1;
    if (end_limit > series.last_index()) {
        throw IndexOutOfRangeError("window end limit exceeds observed range");
    }
    const std::int64_t count = end_limit - out.end0 + 1;
    if (count < 1) {
        throw SeriesTooShortError("series holds no complete window of length " +
                                  std::to_string(q));
    }
    // Consecutive windows are unit-shifted views into the same buffer.
    Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> raw(
        series.values().data(), q, count, Eigen::OuterStride<>(1));
    if (mean_vector != nullptr) {
        out.dots = raw.transpose() * (*mean_vector);
    }
    out.cols = llt.matrixL().solve(raw);
    return out;
}

double log_sum_exp(const Eigen::ArrayXd& x) {
    const double shift = x.maxCoeff();
    return shift + std::log((x - shift).exp().sum());
}

GaussianMixture mixture_from_windows(const TimeSeries& series,
                                     const TransformedWindows& w,
                                     std::int64_t tau, int k,
                                     const LagSet& lags, double variance) {
    if (lags.empty()) {
        throw EmptyLagSetError("no candidate lags for target index " +
                               std::to_string(tau));
    }
    const std::int64_t d = lags.count();
    const auto current = w.col(tau - k);
    const double current_dot = w.dot(tau - k);

    GaussianMixture mix;
    mix.common_variance = variance;
    mix.weights.resize(d);
    mix.means.resize(d);
    mix.lag_labels.resize(d);

    Eigen::ArrayXd log_w(d);
    for (std::int64_t c = 0; c < d; ++c) {
        const std::int64_t j = lags.lo + c;
        log_w[c] = -0.5 * (current - w.col(tau - k - j)).squaredNorm();
        mix.means[c] = series[tau - j] + (current_dot - w.dot(tau - k - j));
        mix.lag_labels[c] = j;
    }
    const double lse = log_sum_exp(log_w);
    for (std::int64_t c = 0; c < d; ++c) {
        mix.weights[c] = std::exp(log_w[c] - lse);
    }
    return mix;
}

}  // namespace lmar::detail
