#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "lmar/estimation.hpp"
#include "lmar/mixture.hpp"
#include "lmar/sigma.hpp"
#include "lmar/time_series.hpp"

namespace lmar {

struct PredictionInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
};

/// One k-step-ahead forecast: the predictive mixture, its mean as the point
/// forecast, an equal-tailed interval, and (once the truth is known) the log
/// probability score.
struct Forecast {
    int horizon_k = 0;
    GaussianMixture mixture;
    double point = 0.0;
    PredictionInterval interval;
    std::optional<double> log_score;
};

/// Predictive law of Y_{n+k} given history through n, for 1 <= k <= p.
/// Component j runs over the candidate lags of index n+k; its weight compares
/// the last p-k+1 observed values with the same-length window ending at n-j
/// under the horizon-k partition of the covariance, its mean is Y_{n+k-j}
/// plus the regression adjustment, and all components share the horizon-k
/// innovation variance. The candidate set spans the entire history (the
/// series' first index plays the role of -m).
GaussianMixture predictive_distribution(const TimeSeries& history,
                                        const FittedModel& model, int k);

/// Mixture mean (optimal under squared error).
double point_forecast(const GaussianMixture& mixture);

double mixture_cdf(const GaussianMixture& mixture, double y);

/// Inverse CDF by bisection to 1e-10 in probability.
double mixture_quantile(const GaussianMixture& mixture, double q);

/// Equal-tailed central interval at the given level.
PredictionInterval prediction_interval(const GaussianMixture& mixture,
                                       double level);

/// Negative log predictive density at the realized value.
double log_score(const GaussianMixture& mixture, double y_true);

Forecast make_forecast(const GaussianMixture& mixture, int k, double level);

/// Incremental k-step forecaster: factorizes the horizon partition once and
/// extends per-observation state in O(p^2), so a rolling pass over a test
/// stretch costs O(history) per step instead of O(history * p^2). predict()
/// agrees with predictive_distribution on the same data.
class KStepPredictor {
public:
    KStepPredictor(const TimeSeries& history, const MixtureParam& sigma, int k,
                   std::int64_t reserve_extra = 0);

    void observe(double y);
    GaussianMixture predict() const;
    double horizon_variance() const { return sigma2_k_; }
    std::int64_t last_index() const { return series_.last_index(); }

private:
    void push_window(std::int64_t end);

    TimeSeries series_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd regression_;  // s11^{-1} s12
    double sigma2_k_ = 0.0;
    int p_ = 0;
    int k_ = 0;
    int q_ = 0;  // window length p-k+1
    std::int64_t end0_ = 0;
    std::int64_t n_windows_ = 0;
    Eigen::MatrixXd cols_;
    Eigen::VectorXd dots_;
    Eigen::VectorXd scratch_;
};

}  // namespace lmar
