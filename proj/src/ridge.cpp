#include "lmar/ridge.hpp"

#include <algorithm>
#include <string>

#include "lmar/errors.hpp"

namespace lmar {

RidgeModel ridge_fit(const TimeSeries& train, int p, int k, double lambda,
                     bool penalize_intercept) {
    if (p < 1) throw InvalidArgumentError("p must be >= 1");
    if (k < 1) throw InvalidArgumentError("k must be >= 1");
    if (lambda < 0.0) throw InvalidArgumentError("lambda must be >= 0");
    const std::int64_t rows = train.size() - p - k + 1;
    if (rows < 2) {
        throw SeriesTooShortError("ridge fit needs at least p+k+1 = " +
                                  std::to_string(p + k + 1) + " observations");
    }

    // Row r: regressors Y_{i-p+1..i}, response Y_{i+k}, with an intercept
    // column in front.
    Eigen::MatrixXd design(rows, p + 1);
    Eigen::VectorXd response(rows);
    const std::int64_t first = train.first_index();
    for (std::int64_t r = 0; r < rows; ++r) {
        const std::int64_t i = first + p - 1 + r;
        design(r, 0) = 1.0;
        for (int l = 0; l < p; ++l) {
            design(r, 1 + l) = train[i - p + 1 + l];
        }
        response(r) = train[i + k];
    }

    Eigen::VectorXd coef;
    if (lambda == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < p + 1) {
            throw SingularMatrixError(
                "design is rank deficient at lambda = 0; use lambda > 0");
        }
        coef = qr.solve(response);
    } else {
        Eigen::MatrixXd gram = design.transpose() * design;
        gram.diagonal().array() += lambda;
        if (!penalize_intercept) {
            gram(0, 0) -= lambda;
        }
        coef = cholesky_spd(gram, "penalized normal equations")
                   .solve(design.transpose() * response);
    }

    RidgeModel model;
    model.p = p;
    model.k = k;
    model.lambda = lambda;
    model.beta0 = coef(0);
    model.beta = coef.tail(p);
    const double mse = (response - design * coef).squaredNorm() /
                       static_cast<double>(rows);
    model.resid_variance = std::max(mse, 1e-12);
    return model;
}

Forecast ridge_predict(const RidgeModel& model, const TimeSeries& history,
                       double level) {
    if (history.size() < model.p) {
        throw SeriesTooShortError("history shorter than the model order p = " +
                                  std::to_string(model.p));
    }
    const std::int64_t n = history.last_index();
    double point = model.beta0;
    for (int l = 0; l < model.p; ++l) {
        point += model.beta[l] * history[n - model.p + 1 + l];
    }
    GaussianMixture mix;
    mix.weights = {1.0};
    mix.means = {point};
    mix.common_variance = model.resid_variance;
    mix.lag_labels = {0};
    return make_forecast(mix, model.k, level);
}

}  // namespace lmar
