#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lmar/forecast.hpp"
#include "lmar/time_series.hpp"

namespace lmar {

/// Penalized linear k-step predictor on the last p observations:
/// prediction = beta0 + beta . (Y_{i-p+1}, ..., Y_i). The L2 penalty applies
/// to the intercept as well unless penalize_intercept is cleared.
struct RidgeModel {
    int p = 0;
    int k = 0;
    double lambda = 0.0;
    double beta0 = 0.0;
    Eigen::VectorXd beta;
    double resid_variance = 0.0;
};

RidgeModel ridge_fit(const TimeSeries& train, int p, int k, double lambda,
                     bool penalize_intercept = true);

/// Point forecast plus a single-component Gaussian predictive with the
/// training residual variance.
Forecast ridge_predict(const RidgeModel& model, const TimeSeries& history,
                       double level = 0.9);

}  // namespace lmar
