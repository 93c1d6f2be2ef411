#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmar/estimation.hpp"
#include "lmar/forecast.hpp"
#include "lmar/mixture.hpp"
#include "lmar/ridge.hpp"
#include "lmar/time_series.hpp"

namespace lmar {

/// Streaming forecaster adapter: fit once on the training block, then walk
/// the evaluation stretch via start/forecast/observe. The harness only ever
/// exposes observations up to the current forecast origin.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual std::string name() const = 0;
    /// Train on the given block for horizon k.
    virtual void fit(const TimeSeries& train, int k) = 0;
    /// Begin streaming with observations through the first forecast origin.
    virtual void start(const TimeSeries& history) = 0;
    /// Predictive mixture for (current origin) + k.
    virtual GaussianMixture forecast() = 0;
    /// Advance the origin by one observed value.
    virtual void observe(double y) = 0;
};

class LmarForecaster : public Forecaster {
public:
    LmarForecaster(int p, std::int64_t m, FitConfig config = FitConfig{})
        : p_(p), m_(m), config_(std::move(config)) {}

    std::string name() const override { return "lmar"; }
    void fit(const TimeSeries& train, int k) override;
    void start(const TimeSeries& history) override;
    GaussianMixture forecast() override;
    void observe(double y) override;

    const FittedModel& model() const;

private:
    int p_;
    std::int64_t m_;
    FitConfig config_;
    int k_ = 0;
    std::optional<FittedModel> model_;
    std::optional<KStepPredictor> predictor_;
};

class RidgeForecaster : public Forecaster {
public:
    RidgeForecaster(int p, double lambda) : p_(p), lambda_(lambda) {}

    std::string name() const override { return "ridge"; }
    void fit(const TimeSeries& train, int k) override;
    void start(const TimeSeries& history) override;
    GaussianMixture forecast() override;
    void observe(double y) override;

    const RidgeModel& model() const;

private:
    int p_;
    double lambda_;
    std::optional<RidgeModel> model_;
    std::vector<double> window_;  // last p observations
};

struct EvalSplit {
    std::int64_t train_len = 1200;
    std::int64_t test_len = 1200;
};

/// Contiguous prefix/suffix split; the series may extend past the two blocks
/// (the extra tail covers forecast targets beyond the last origin).
std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& series,
                                                   std::int64_t train_len,
                                                   std::int64_t test_len);

struct MetricsRow {
    std::string method;
    int horizon = 0;
    double rmse = 0.0;
    double mae = 0.0;  // median absolute error
    double best_fraction = 0.0;
    double coverage90 = 0.0;
    double mean_log_score = 0.0;
    std::int64_t n_predictions = 0;
    bool failed = false;
    std::string failure;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;
};

struct StepRecord {
    std::int64_t target = 0;
    std::string method;
    double point = 0.0;
    double truth = 0.0;
    double log_score = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct RollingOptions {
    EvalSplit split;
    double level = 0.9;
    /// Also emit per-step records with interval endpoints (slower).
    bool capture_records = false;
    /// Floor applied to log probability scores so degenerate predictive
    /// densities keep table arithmetic finite.
    double log_score_floor = -746.0;
};

struct RollingResult {
    MetricsTable table;
    std::vector<StepRecord> records;
};

/// Out-of-sample walk: every method is fit on the training block, then at
/// each origin t in the evaluation block emits a forecast of Y_{t+k} from
/// data through t before the next value is revealed. Point error, interval
/// coverage at the configured level and the log probability score are
/// accumulated per method; the best fraction splits ties equally.
RollingResult rolling_evaluate(
    const TimeSeries& series,
    const std::vector<std::shared_ptr<Forecaster>>& methods, int k,
    const RollingOptions& options = RollingOptions{});

/// Hyperparameter grids for the tuning protocol.
struct LmarGrid {
    std::vector<int> p_values{8, 11, 15, 22, 30};
    std::int64_t m = 400;
    FitConfig fit;
};

struct RidgeGrid {
    std::vector<int> p_values{10, 22, 45};
    std::vector<double> lambdas{0.01, 0.1, 1.0, 10.0};
};

struct MethodGrids {
    std::optional<LmarGrid> lmar;
    std::optional<RidgeGrid> ridge;
};

struct ComboScore {
    std::string method;
    int p = 0;
    double lambda = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    bool ok = false;
    std::string failure;
};

struct HyperChoice {
    std::string method;
    int p = 0;
    double lambda = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
};

/// Scores every grid point with the inner protocol: fit on the first 900
/// training observations, score the next 300 by MAE and RMSE.
std::vector<ComboScore> grid_scores(const TimeSeries& train, int k,
                                    const MethodGrids& grids);

/// Per-method argmin over grid_scores: MAE first, then RMSE, then smaller p,
/// then smaller lambda.
std::vector<HyperChoice> grid_search(const TimeSeries& train, int k,
                                     const MethodGrids& grids);

/// Selection shared by grid_search and multi-series tuning.
std::vector<HyperChoice> select_best(const std::vector<ComboScore>& scores);

}  // namespace lmar
