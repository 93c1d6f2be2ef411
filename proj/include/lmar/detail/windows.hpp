#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lmar/lags.hpp"
#include "lmar/mixture.hpp"
#include "lmar/time_series.hpp"

namespace lmar::detail {

// Sliding length-q windows of a series, pushed through a triangular solve so
// that quadratic forms against the factored covariance block reduce to
// squared distances between columns. Column c holds L^{-1} * window ending at
// index end0 + c; `dots` optionally carries a fixed-vector inner product with
// the raw window (used for the mixture means).
struct TransformedWindows {
    Eigen::MatrixXd cols;
    Eigen::VectorXd dots;
    std::int64_t end0 = 0;
    int q = 0;

    std::int64_t count() const { return cols.cols(); }
    auto col(std::int64_t end_index) const { return cols.col(end_index - end0); }
    double dot(std::int64_t end_index) const { return dots[end_index - end0]; }
};

// Transforms every complete window whose end lies in [series.first+q-1,
// end_limit]. `mean_vector`, when non-null, fills `dots` with
// mean_vector . raw_window per column.
TransformedWindows transform_windows(const TimeSeries& series, int q,
                                     std::int64_t end_limit,
                                     const Eigen::LLT<Eigen::MatrixXd>& llt,
                                     const Eigen::VectorXd* mean_vector);

// Assembles the mixture for target index tau at horizon k from transformed
// windows: component j in `lags` gets log-weight -1/2 ||T(tau-k) -
// T(tau-k-j)||^2 (normalized by log-sum-exp) and mean Y[tau-j] + dots(tau-k)
// - dots(tau-k-j).
GaussianMixture mixture_from_windows(const TimeSeries& series,
                                     const TransformedWindows& w,
                                     std::int64_t tau, int k,
                                     const LagSet& lags, double variance);

// log(sum_i exp(x_i)) with max-shift; requires a nonempty range.
double log_sum_exp(const Eigen::ArrayXd& x);

}  // namespace lmar::detail
