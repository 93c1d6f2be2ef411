#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmar/mixture.hpp"
#include "lmar/sigma.hpp"
#include "lmar/time_series.hpp"

namespace lmar {

/// Posterior lag weights, one row per target index 0..n; row i runs over the
/// candidate lags p+1..i+m-p in ascending order and sums to one.
struct Responsibilities {
    std::vector<std::vector<double>> rows;
};

struct FitConfig {
    double rel_tol = 1e-4;
    int max_iter = 100;
    /// Diagonal initialization when absent.
    std::optional<MixtureParam> init;
};

struct FittedModel {
    MixtureParam sigma_hat;
    int p = 0;
    std::int64_t m = 0;
    int iterations = 0;
    /// Surrogate objective at the initial and each updated covariance;
    /// length iterations+1. Not necessarily monotone.
    std::vector<double> monitor_trace;
    double exact_loglik_final = 0.0;
    bool converged = false;
    /// Set when the returned covariance is an earlier iterate than the last,
    /// picked for the higher surrogate value.
    bool best_iterate_used = false;
};

Responsibilities e_step(const TimeSeries& series, const MixtureParam& sigma,
                        std::int64_t m);

MixtureParam m_step(const TimeSeries& series, const Responsibilities& omega,
                    int p, std::int64_t m);

/// Diagonal starting covariance: every diagonal entry is the sample variance
/// of the series' first differences, floored at 1e-8.
MixtureParam init_sigma(const TimeSeries& series, int p);

/// Alternates e_step/m_step from the configured start, monitoring the
/// surrogate objective after every update. Stops when the relative change in
/// the monitor drops below rel_tol or max_iter is reached, and returns the
/// iterate with the highest monitor value seen.
FittedModel fit(const TimeSeries& series, int p, std::int64_t m,
                const FitConfig& config = FitConfig{});

}  // namespace lmar
