#include "lmar/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lmar/errors.hpp"

namespace lmar {

void LmarForecaster::fit(const TimeSeries& train, int k) {
    if (k < 1 || k > p_) {
        throw HorizonError("horizon k = " + std::to_string(k) +
                           " outside valid range [1, " + std::to_string(p_) + "]");
    }
    k_ = k;
    model_ = lmar::fit(train, p_, m_, config_);
    predictor_.reset();
}

void LmarForecaster::start(const TimeSeries& history) {
    predictor_.emplace(history, model().sigma_hat, k_,
                       /*reserve_extra=*/history.size());
}

GaussianMixture LmarForecaster::forecast() { return predictor_->predict(); }

void LmarForecaster::observe(double y) { predictor_->observe(y); }

const FittedModel& LmarForecaster::model() const {
    if (!model_) throw Error("forecaster used before fit");
    return *model_;
}

void RidgeForecaster::fit(const TimeSeries& train, int k) {
    model_ = ridge_fit(train, p_, k, lambda_);
    window_.clear();
}

void RidgeForecaster::start(const TimeSeries& history) {
    if (history.size() < p_) {
        throw SeriesTooShortError("history shorter than the model order");
    }
    window_.assign(history.values().end() - p_, history.values().end());
}

GaussianMixture RidgeForecaster::forecast() {
    const RidgeModel& m = model();
    double point = m.beta0;
    for (int l = 0; l < p_; ++l) point += m.beta[l] * window_[l];
    GaussianMixture mix;
    mix.weights = {1.0};
    mix.means = {point};
    mix.common_variance = m.resid_variance;
    mix.lag_labels = {0};
    return mix;
}

void RidgeForecaster::observe(double y) {
    window_.erase(window_.begin());
    window_.push_back(y);
}

const RidgeModel& RidgeForecaster::model() const {
    if (!model_) throw Error("forecaster used before fit");
    return *model_;
}

std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& series,
                                                   std::int64_t train_len,
                                                   std::int64_t test_len) {
    if (train_len < 1 || test_len < 1) {
        throw InvalidArgumentError("split lengths must be positive");
    }
    if (series.size() < train_len + test_len) {
        throw SeriesTooShortError(
            "series holds " + std::to_string(series.size()) +
            " observations; split needs " + std::to_string(train_len + test_len));
    }
    const auto& v = series.values();
    TimeSeries train(std::vector<double>(v.begin(), v.begin() + train_len),
                     series.sample_rate_hz(), series.first_index());
    TimeSeries test(std::vector<double>(v.begin() + train_len,
                                        v.begin() + train_len + test_len),
                    series.sample_rate_hz(), series.first_index() + train_len);
    return {std::move(train), std::move(test)};
}

namespace {

double median_abs(std::vector<double> abs_errors) {
    const std::size_t n = abs_errors.size();
    auto mid = abs_errors.begin() + n / 2;
    std::nth_element(abs_errors.begin(), mid, abs_errors.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(abs_errors.begin(), mid);
    return 0.5 * (lower + upper);
}

struct MethodState {
    std::shared_ptr<Forecaster> method;
    bool failed = false;
    std::string failure;
    std::vector<double> abs_errors;
    double sq_error_sum = 0.0;
    std::int64_t covered = 0;
    double score_sum = 0.0;
    double best_credit = 0.0;
};

// Walks origins [first_origin, first_origin + n_steps) over the full series,
// forecasting Y_{origin+k} per live method before revealing anything past the
// origin.
RollingResult run_rolling(const TimeSeries& series,
                          const std::vector<std::shared_ptr<Forecaster>>& methods,
                          int k, const TimeSeries& train,
                          std::int64_t first_origin, std::int64_t n_steps,
                          const RollingOptions& options) {
    if (methods.empty()) {
        throw InvalidArgumentError("at least one method is required");
    }
    if (k < 1) throw InvalidArgumentError("horizon must be >= 1");
    if (first_origin + n_steps - 1 + k > series.last_index()) {
        throw SeriesTooShortError(
            "series too short for " + std::to_string(n_steps) +
            " forecasts at horizon " + std::to_string(k));
    }

    std::vector<MethodState> states;
    states.reserve(methods.size());
    for (const auto& m : methods) {
        MethodState st;
        st.method = m;
        try {
            m->fit(train, k);
        } catch (const Error& e) {
            st.failed = true;
            st.failure = e.what();
        }
        states.push_back(std::move(st));
    }

    const TimeSeries initial_history =
        series.prefix(first_origin - series.first_index() + 1);
    for (auto& st : states) {
        if (st.failed) continue;
        try {
            st.method->start(initial_history);
            st.abs_errors.reserve(n_steps);
        } catch (const Error& e) {
            st.failed = true;
            st.failure = e.what();
        }
    }

    RollingResult result;
    const double tail = 0.5 * (1.0 - options.level);
    std::vector<double> step_abs(states.size());

    for (std::int64_t s = 0; s < n_steps; ++s) {
        const std::int64_t origin = first_origin + s;
        const std::int64_t target = origin + k;
        const double truth = series[target];

        for (std::size_t mi = 0; mi < states.size(); ++mi) {
            auto& st = states[mi];
            if (st.failed) {
                step_abs[mi] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const GaussianMixture mix = st.method->forecast();
            const double point = point_forecast(mix);
            const double err = point - truth;
            st.sq_error_sum += err * err;
            st.abs_errors.push_back(std::abs(err));
            step_abs[mi] = std::abs(err);

            // Truth lies in the equal-tailed interval exactly when its CDF
            // value lies in [tail, 1-tail]; one CDF evaluation replaces two
            // quantile searches.
            const double u = mixture_cdf(mix, truth);
            if (u >= tail && u <= 1.0 - tail) ++st.covered;

            double score = log_score(mix, truth);
            if (!std::isfinite(score) || score < options.log_score_floor) {
                score = options.log_score_floor;
            }
            st.score_sum += score;

            if (options.capture_records) {
                const auto interval = prediction_interval(mix, options.level);
                result.records.push_back(StepRecord{target, st.method->name(),
                                                    point, truth, score,
                                                    interval.lo, interval.hi});
            }
        }

        // Strictly smallest absolute error wins the step; ties share.
        double best = std::numeric_limits<double>::infinity();
        int winners = 0;
        for (std::size_t mi = 0; mi < states.size(); ++mi) {
            if (states[mi].failed) continue;
            if (step_abs[mi] < best) {
                best = step_abs[mi];
                winners = 1;
            } else if (step_abs[mi] == best) {
                ++winners;
            }
        }
        if (winners > 0) {
            for (std::size_t mi = 0; mi < states.size(); ++mi) {
                if (!states[mi].failed && step_abs[mi] == best) {
                    states[mi].best_credit += 1.0 / winners;
                }
            }
        }

        for (auto& st : states) {
            if (!st.failed) st.method->observe(series[origin + 1]);
        }
    }

    for (auto& st : states) {
        MetricsRow row;
        row.method = st.method->name();
        row.horizon = k;
        if (st.failed || n_steps == 0) {
            row.failed = true;
            row.failure = st.failure;
            row.rmse = row.mae = row.coverage90 = row.mean_log_score =
                std::numeric_limits<double>::quiet_NaN();
            row.best_fraction = 0.0;
            row.n_predictions = 0;
        } else {
            const double n = static_cast<double>(n_steps);
            row.rmse = std::sqrt(st.sq_error_sum / n);
            row.mae = median_abs(st.abs_errors);
            row.best_fraction = st.best_credit / n;
            row.coverage90 = static_cast<double>(st.covered) / n;
            row.mean_log_score = st.score_sum / n;
            row.n_predictions = n_steps;
        }
        result.table.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace

RollingResult rolling_evaluate(
    const TimeSeries& series,
    const std::vector<std::shared_ptr<Forecaster>>& methods, int k,
    const RollingOptions& options) {
    const auto& split = options.split;
    if (series.size() < split.train_len + split.test_len + k) {
        throw SeriesTooShortError(
            "series holds " + std::to_string(series.size()) +
            " observations; evaluation needs " +
            std::to_string(split.train_len + split.test_len + k));
    }
    auto [train, test] = split_train_test(series, split.train_len, split.test_len);
    return run_rolling(series, methods, k, train,
                       /*first_origin=*/series.first_index() + split.train_len,
                       split.test_len, options);
}

std::vector<ComboScore> grid_scores(const TimeSeries& train, int k,
                                    const MethodGrids& grids) {
    constexpr std::int64_t kInnerFit = 900;
    constexpr std::int64_t kInnerScore = 300;
    if (train.size() < kInnerFit + kInnerScore) {
        throw SeriesTooShortError("tuning needs at least 1200 training observations");
    }

    RollingOptions options;
    options.split = EvalSplit{kInnerFit, kInnerScore};

    auto score_one = [&](std::shared_ptr<Forecaster> method) {
        // Score targets are the 300 observations after the inner fit block;
        // origins sit k steps earlier so every truth stays inside `train`.
        const auto inner_train = train.prefix(kInnerFit);
        const auto res = run_rolling(
            train, {std::move(method)}, k, inner_train,
            train.first_index() + kInnerFit - k, kInnerScore, options);
        return res.table.rows.front();
    };

    std::vector<ComboScore> scores;
    if (grids.lmar) {
        for (int p : grids.lmar->p_values) {
            ComboScore cs;
            cs.method = "lmar";
            cs.p = p;
            try {
                const auto row = score_one(std::make_shared<LmarForecaster>(
                    p, grids.lmar->m, grids.lmar->fit));
                cs.ok = !row.failed;
                cs.failure = row.failure;
                cs.mae = row.mae;
                cs.rmse = row.rmse;
            } catch (const Error& e) {
                cs.ok = false;
                cs.failure = e.what();
            }
            scores.push_back(std::move(cs));
        }
    }
    if (grids.ridge) {
        for (int p : grids.ridge->p_values) {
            for (double lambda : grids.ridge->lambdas) {
                ComboScore cs;
                cs.method = "ridge";
                cs.p = p;
                cs.lambda = lambda;
                try {
                    const auto row =
                        score_one(std::make_shared<RidgeForecaster>(p, lambda));
                    cs.ok = !row.failed;
                    cs.failure = row.failure;
                    cs.mae = row.mae;
                    cs.rmse = row.rmse;
                } catch (const Error& e) {
                    cs.ok = false;
                    cs.failure = e.what();
                }
                scores.push_back(std::move(cs));
            }
        }
    }
    return scores;
}

std::vector<HyperChoice> select_best(const std::vector<ComboScore>& scores) {
    std::vector<HyperChoice> best;
    for (const auto& cs : scores) {
        if (!cs.ok) continue;
        auto it = std::find_if(best.begin(), best.end(), [&](const HyperChoice& h) {
            return h.method == cs.method;
        });
        if (it == best.end()) {
            best.push_back(HyperChoice{cs.method, cs.p, cs.lambda, cs.mae, cs.rmse});
            continue;
        }
        const bool better =
            cs.mae < it->mae ||
            (cs.mae == it->mae &&
             (cs.rmse < it->rmse ||
              (cs.rmse == it->rmse &&
               (cs.p < it->p || (cs.p == it->p && cs.lambda < it->lambda)))));
        if (better) {
            *it = HyperChoice{cs.method, cs.p, cs.lambda, cs.mae, cs.rmse};
        }
    }
    if (best.empty()) {
        throw Error("every grid point failed to fit or score");
    }
    return best;
}

std::vector<HyperChoice> grid_search(const TimeSeries& train, int k,
                                     const MethodGrids& grids) {
    return select_best(grid_scores(train, k, grids));
}

}  // namespace lmar
