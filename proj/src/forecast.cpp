#include "lmar/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lmar/detail/windows.hpp"
#include "lmar/errors.hpp"
#include "lmar/lags.hpp"

namespace lmar {

namespace {

void validate_mixture(const GaussianMixture& mix) {
    if (mix.weights.empty() || mix.weights.size() != mix.means.size()) {
        throw ShapeError("mixture weights and means must be nonempty and equal length");
    }
    if (!(mix.common_variance > 0.0)) {
        throw ShapeError("mixture variance must be positive");
    }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

GaussianMixture predictive_distribution(const TimeSeries& history,
                                        const FittedModel& model, int k) {
    const int p = model.p;
    if (k < 1 || k > p) {
        throw HorizonError("horizon k = " + std::to_string(k) +
                           " outside valid range [1, " + std::to_string(p) + "]");
    }
    const std::int64_t n = history.last_index();
    const std::int64_t m_eff = -history.first_index();
    const LagSet lags = candidate_lags(n + k, p, m_eff);
    if (lags.empty()) {
        throw EmptyLagSetError("history too short for any candidate lag");
    }
    const KPartition part = partition_k(model.sigma_hat, k);
    const auto llt = cholesky_spd(part.s11, "horizon partition block");
    const Eigen::VectorXd regression = llt.solve(part.s12);
    const double sigma2_k = part.s22 - regression.dot(part.s12);
    if (!(sigma2_k > 0.0)) {
        throw SingularMatrixError("horizon innovation variance is not positive");
    }
    const int q = p - k + 1;
    const auto windows =
        detail::transform_windows(history, q, n, llt, &regression);
    return detail::mixture_from_windows(history, windows, n + k, k, lags,
                                        sigma2_k);
}

double point_forecast(const GaussianMixture& mixture) {
    validate_mixture(mixture);
    return mixture.mean();
}

double mixture_cdf(const GaussianMixture& mixture, double y) {
    validate_mixture(mixture);
    const double sd = std::sqrt(mixture.common_variance);
    double acc = 0.0;
    for (std::size_t c = 0; c < mixture.weights.size(); ++c) {
        acc += mixture.weights[c] * normal_cdf((y - mixture.means[c]) / sd);
    }
    return acc;
}

double mixture_quantile(const GaussianMixture& mixture, double q) {
    validate_mixture(mixture);
    if (!(q > 0.0) || !(q < 1.0)) {
        throw InvalidProbabilityError("quantile level must lie in (0, 1)");
    }
    const double sd = std::sqrt(mixture.common_variance);
    const auto [mn, mx] =
        std::minmax_element(mixture.means.begin(), mixture.means.end());
    double lo = *mn - 10.0 * sd;
    double hi = *mx + 10.0 * sd;
    // Expand geometrically until the bracket straddles q.
    double span = hi - lo;
    while (mixture_cdf(mixture, lo) > q) {
        lo -= span;
        span *= 2.0;
    }
    span = hi - lo;
    while (mixture_cdf(mixture, hi) < q) {
        hi += span;
        span *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = mixture_cdf(mixture, mid);
        if (std::abs(f - q) <= 1e-10 || mid == lo || mid == hi) {
            return mid;
        }
        (f < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PredictionInterval prediction_interval(const GaussianMixture& mixture,
                                       double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw InvalidProbabilityError("interval level must lie in (0, 1)");
    }
    const double tail = 0.5 * (1.0 - level);
    return PredictionInterval{mixture_quantile(mixture, tail),
                              mixture_quantile(mixture, 1.0 - tail), level};
}

double log_score(const GaussianMixture& mixture, double y_true) {
    validate_mixture(mixture);
    const double var = mixture.common_variance;
    Eigen::ArrayXd terms(static_cast<Eigen::Index>(mixture.weights.size()));
    for (std::size_t c = 0; c < mixture.weights.size(); ++c) {
        const double r = y_true - mixture.means[c];
        const double lw = mixture.weights[c] > 0.0
                              ? std::log(mixture.weights[c])
                              : -std::numeric_limits<double>::infinity();
        terms[static_cast<Eigen::Index>(c)] = lw - 0.5 * r * r / var;
    }
    const double log_density = detail::log_sum_exp(terms) -
                               0.5 * std::log(2.0 * std::numbers::pi * var);
    return -log_density;
}

Forecast make_forecast(const GaussianMixture& mixture, int k, double level) {
    Forecast f;
    f.horizon_k = k;
    f.point = point_forecast(mixture);
    f.interval = prediction_interval(mixture, level);
    f.mixture = mixture;
    return f;
}

KStepPredictor::KStepPredictor(const TimeSeries& history,
                               const MixtureParam& sigma, int k,
                               std::int64_t reserve_extra)
    : series_(history), p_(sigma.p()), k_(k), q_(sigma.p() - k + 1) {
    if (k < 1 || k > p_) {
        throw HorizonError("horizon k = " + std::to_string(k) +
                           " outside valid range [1, " + std::to_string(p_) +
                           "]");
    }
    const KPartition part = partition_k(sigma, k);
    llt_ = cholesky_spd(part.s11, "horizon partition block");
    regression_ = llt_.solve(part.s12);
    sigma2_k_ = part.s22 - regression_.dot(part.s12);
    if (!(sigma2_k_ > 0.0)) {
        throw SingularMatrixError("horizon innovation variance is not positive");
    }
    end0_ = series_.first_index() + q_ - 1;
    const std::int64_t initial = series_.last_index() - end0_ + 1;
    if (initial < 1) {
        throw SeriesTooShortError("history shorter than one window");
    }
    cols_.resize(q_, initial + std::max<std::int64_t>(reserve_extra, 0));
    dots_.resize(cols_.cols());
    scratch_.resize(q_);
    for (std::int64_t end = end0_; end <= series_.last_index(); ++end) {
        push_window(end);
    }
}

void KStepPredictor::push_window(std::int64_t end) {
    if (n_windows_ == cols_.cols()) {
        const auto grown = std::max<std::int64_t>(2 * cols_.cols(), 16);
        cols_.conservativeResize(Eigen::NoChange, grown);
        dots_.conservativeResize(grown);
    }
    for (int l = 0; l < q_; ++l) scratch_[l] = series_[end - q_ + 1 + l];
    dots_[n_windows_] = regression_.dot(scratch_);
    llt_.matrixL().solveInPlace(scratch_);
    cols_.col(n_windows_) = scratch_;
    ++n_windows_;
}

void KStepPredictor::observe(double y) {
    series_.append(y);
    push_window(series_.last_index());
}

GaussianMixture KStepPredictor::predict() const {
    const std::int64_t n = series_.last_index();
    const std::int64_t m_eff = -series_.first_index();
    const LagSet lags = candidate_lags(n + k_, p_, m_eff);
    if (lags.empty()) {
        throw EmptyLagSetError("history too short for any candidate lag");
    }
    const std::int64_t d = lags.count();
    const auto current = cols_.col(n - end0_);
    const double current_dot = dots_[n - end0_];

    GaussianMixture mix;
    mix.common_variance = sigma2_k_;
    mix.weights.resize(d);
    mix.means.resize(d);
    mix.lag_labels.resize(d);
    Eigen::ArrayXd log_w(d);
    for (std::int64_t c = 0; c < d; ++c) {
        const std::int64_t j = lags.lo + c;
        log_w[c] = -0.5 * (current - cols_.col(n - j - end0_)).squaredNorm();
        mix.means[c] = series_[n + k_ - j] + (current_dot - dots_[n - j - end0_]);
        mix.lag_labels[c] = j;
    }
    const double lse = detail::log_sum_exp(log_w);
    for (std::int64_t c = 0; c < d; ++c) {
        mix.weights[c] = std::exp(log_w[c] - lse);
    }
    return mix;
}

}  // namespace lmar
