#include "lmar/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lmar/detail/windows.hpp"
#include "lmar/errors.hpp"
#include "lmar/lags.hpp"

namespace lmar {

namespace {

void require_history(const TimeSeries& series, std::int64_t m,
                     std::int64_t through) {
    if (series.first_index() > -m || series.last_index() < through) {
        throw IndexOutOfRangeError(
            "series must cover indices " + std::to_string(-m) + ".." +
            std::to_string(through) + "; have " +
            std::to_string(series.first_index()) + ".." +
            std::to_string(series.last_index()));
    }
}

}  // namespace

GaussianMixture conditional_mixture(const TimeSeries& series, std::int64_t i,
                                    const MixtureParam& sigma, std::int64_t m) {
    const int p = sigma.p();
    require_history(series, m, i - 1);
    const LagSet lags = candidate_lags(i, p, m);
    if (lags.empty()) {
        throw EmptyLagSetError("candidate lag set is empty at index " +
                               std::to_string(i));
    }
    const auto llt = cholesky_spd(sigma.block11(), "leading covariance block");
    const DerivedParams derived = derive_params(sigma);
    const auto windows =
        detail::transform_windows(series, p, i - 1, llt, &derived.gamma);
    return detail::mixture_from_windows(series, windows, i, /*k=*/1, lags,
                                        derived.sigma2);
}

TimeSeries simulate(const MixtureParam& sigma, std::int64_t m,
                    const TimeSeries& seed_history, std::int64_t n_steps,
                    std::uint64_t rng_seed) {
    const int p = sigma.p();
    if (seed_history.size() != m) {
        throw InvalidArgumentError("seed history length must equal m");
    }
    if (m < 2 * static_cast<std::int64_t>(p) + 1) {
        throw SeriesTooShortError("seed history needs at least 2p+1 = " +
                                  std::to_string(2 * p + 1) + " values");
    }
    if (n_steps < 1) {
        throw InvalidArgumentError("n_steps must be >= 1");
    }

    const auto llt = cholesky_spd(sigma.block11(), "leading covariance block");
    const DerivedParams derived = derive_params(sigma);
    const double noise_sd = std::sqrt(derived.sigma2);

    TimeSeries path = seed_history.with_first_index(-m);

    // Transformed length-p windows, grown one column per drawn value.
    const std::int64_t final_windows = m + n_steps - p + 1;
    Eigen::MatrixXd cols(p, final_windows);
    Eigen::VectorXd dots(final_windows);
    const std::int64_t end0 = -m + p - 1;
    Eigen::VectorXd window(p);
    for (std::int64_t end = end0; end <= -1; ++end) {
        for (int l = 0; l < p; ++l) window[l] = path[end - p + 1 + l];
        cols.col(end - end0) = llt.matrixL().solve(window);
        dots[end - end0] = derived.gamma.dot(window);
    }

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    for (std::int64_t i = 0; i < n_steps; ++i) {
        const LagSet lags = candidate_lags(i, p, m);
        const std::int64_t d = lags.count();
        const auto current = cols.col(i - 1 - end0);
        Eigen::ArrayXd log_w(d);
        for (std::int64_t c = 0; c < d; ++c) {
            log_w[c] =
                -0.5 * (current - cols.col(i - 1 - (lags.lo + c) - end0)).squaredNorm();
        }
        const double lse = detail::log_sum_exp(log_w);

        // Inverse-CDF draw of the latent lag.
        const double u = unif(rng);
        double cum = 0.0;
        std::int64_t pick = d - 1;
        for (std::int64_t c = 0; c < d; ++c) {
            cum += std::exp(log_w[c] - lse);
            if (u <= cum) {
                pick = c;
                break;
            }
        }
        const std::int64_t j = lags.lo + pick;
        const double mean =
            path[i - j] + (dots[i - 1 - end0] - dots[i - 1 - j - end0]);
        path.append(mean + noise_sd * normal(rng));

        for (int l = 0; l < p; ++l) window[l] = path[i - p + 1 + l];
        cols.col(i - end0) = llt.matrixL().solve(window);
        dots[i - end0] = derived.gamma.dot(window);
    }
    return path;
}

double exact_cond_loglik(const TimeSeries& series, const MixtureParam& sigma,
                         std::int64_t m) {
    const int p = sigma.p();
    const std::int64_t n = series.last_index();
    require_history(series, m, 0);
    if (candidate_lags(0, p, m).empty()) {
        throw EmptyLagSetError("candidate lag set is empty at index 0");
    }
    const auto llt = cholesky_spd(sigma.block11(), "leading covariance block");
    const DerivedParams derived = derive_params(sigma);
    const auto windows =
        detail::transform_windows(series, p, n - 1, llt, &derived.gamma);

    const double inv2s2 = 0.5 / derived.sigma2;
    const double log_norm =
        0.5 * std::log(2.0 * std::numbers::pi * derived.sigma2);

    double total = 0.0;
    for (std::int64_t i = 0; i <= n; ++i) {
        const LagSet lags = candidate_lags(i, p, m);
        const std::int64_t d = lags.count();
        const auto current = windows.col(i - 1);
        const double current_dot = windows.dot(i - 1);
        const double yi = series[i];
        Eigen::ArrayXd log_wq(d);   // log weight numerators
        Eigen::ArrayXd log_jd(d);   // joint: weight numerator times kernel
        for (std::int64_t c = 0; c < d; ++c) {
            const std::int64_t j = lags.lo + c;
            const double q =
                (current - windows.col(i - 1 - j)).squaredNorm();
            const double mu =
                series[i - j] + (current_dot - windows.dot(i - 1 - j));
            const double r = yi - mu;
            log_wq[c] = -0.5 * q;
            log_jd[c] = -0.5 * q - r * r * inv2s2;
        }
        total += detail::log_sum_exp(log_jd) - detail::log_sum_exp(log_wq) -
                 log_norm;
    }
    return total;
}

double approx_obs_loglik(const TimeSeries& series, const MixtureParam& sigma,
                         std::int64_t m) {
    const int p = sigma.p();
    const std::int64_t n = series.last_index();
    require_history(series, m, 0);
    if (candidate_lags(0, p, m).empty()) {
        throw EmptyLagSetError("candidate lag set is empty at index 0");
    }
    const auto llt = cholesky_spd(sigma.matrix(), "covariance");
    const auto windows =
        detail::transform_windows(series, p + 1, n, llt, nullptr);
    const double half_logdet =
        llt.matrixLLT().diagonal().array().log().sum();

    double total = 0.0;
    for (std::int64_t i = 0; i <= n; ++i) {
        const LagSet lags = candidate_lags(i, p, m);
        const std::int64_t d = lags.count();
        const auto current = windows.col(i);
        Eigen::ArrayXd log_k(d);
        for (std::int64_t c = 0; c < d; ++c) {
            log_k[c] =
                -0.5 * (current - windows.col(i - (lags.lo + c))).squaredNorm();
        }
        total += detail::log_sum_exp(log_k) - half_logdet -
                 std::log(static_cast<double>(d));
    }
    return total;
}

}  // namespace lmar
