#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "lmar/errors.hpp"
#include "lmar/evaluate.hpp"
#include "lmar/pca.hpp"
#include "lmar/ridge.hpp"
#include "lmar/synth.hpp"
#include "support/naive_reference.hpp"

using namespace lmar;

namespace {

// Forecaster that already knows the whole series; exercises the degenerate
// perfect-predictor corner of the metrics.
class OracleForecaster : public Forecaster {
public:
    explicit OracleForecaster(TimeSeries truth) : truth_(std::move(truth)) {}
    std::string name() const override { return "oracle"; }
    void fit(const TimeSeries&, int k) override { k_ = k; }
    void start(const TimeSeries& history) override {
        origin_ = history.last_index();
    }
    GaussianMixture forecast() override {
        GaussianMixture mix;
        mix.weights = {1.0};
        mix.means = {truth_.at(origin_ + k_)};
        mix.common_variance = 5e-324;  // degenerate but still positive
        mix.lag_labels = {0};
        return mix;
    }
    void observe(double) override { ++origin_; }

private:
    TimeSeries truth_;
    int k_ = 0;
    std::int64_t origin_ = 0;
};

// Records exactly what the harness exposes at every step.
class ProbeForecaster : public Forecaster {
public:
    std::string name() const override { return "probe"; }
    void fit(const TimeSeries& train, int k) override {
        k_ = k;
        train_last_ = train.last_index();
    }
    void start(const TimeSeries& history) override {
        last_seen_ = history.last_index();
        seen_values_.assign(history.values().begin(), history.values().end());
    }
    GaussianMixture forecast() override {
        forecast_origins_.push_back(last_seen_);
        checksum_at_forecast_.push_back(checksum());
        GaussianMixture mix;
        mix.weights = {1.0};
        mix.means = {seen_values_.back()};
        mix.common_variance = 1.0;
        mix.lag_labels = {0};
        return mix;
    }
    void observe(double y) override {
        seen_values_.push_back(y);
        ++last_seen_;
    }

    double checksum() const {
        double acc = 0.0;
        for (double v : seen_values_) acc += v;
        return acc;
    }

    int k_ = 0;
    std::int64_t train_last_ = 0;
    std::int64_t last_seen_ = 0;
    std::vector<double> seen_values_;
    std::vector<std::int64_t> forecast_origins_;
    std::vector<double> checksum_at_forecast_;
};

TimeSeries synth_pc1(const SynthConfig& config) {
    const Trace3d trace = synth_trace(config);
    const PcaBasis basis = pca_fit(trace.points);
    const Eigen::MatrixX3d scores = pca_project(basis, trace.points);
    std::vector<double> pc1(scores.rows());
    for (Eigen::Index r = 0; r < scores.rows(); ++r) pc1[r] = scores(r, 0);
    return TimeSeries(std::move(pc1), config.sample_rate_hz);
}

}  // namespace

TEST_CASE("principal component basis") {
    SUBCASE("axis-aligned variation loads on the first axis") {
        std::vector<Eigen::Vector3d> points;
        for (int s = 0; s < 50; ++s) {
            points.emplace_back(std::sin(0.3 * s), 0.0, 0.0);
        }
        const PcaBasis basis = pca_fit(points);
        CHECK(basis.components(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(basis.components(0, 1)) < 1e-9);
        CHECK(basis.explained_variance[1] == doctest::Approx(0.0));
        CHECK(basis.explained_variance[2] == doctest::Approx(0.0));
    }

    SUBCASE("rotating the cloud rotates the components") {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Eigen::Vector3d> points;
        for (int s = 0; s < 400; ++s) {
            points.emplace_back(3.0 * normal(rng), 1.0 * normal(rng),
                                0.3 * normal(rng));
        }
        const Eigen::Matrix3d q =
            Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized())
                .toRotationMatrix();
        std::vector<Eigen::Vector3d> rotated;
        for (const auto& x : points) rotated.push_back(q * x);

        const PcaBasis a = pca_fit(points);
        const PcaBasis b = pca_fit(rotated);
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d expected = q * a.components.row(c).transpose();
            const double align = std::abs(expected.dot(b.components.row(c)));
            CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(b.explained_variance[c] ==
                  doctest::Approx(a.explained_variance[c]).epsilon(1e-9));
        }
    }

    SUBCASE("components are orthonormal and variances ordered") {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Eigen::Vector3d> points;
        for (int s = 0; s < 200; ++s) {
            points.emplace_back(normal(rng), 0.7 * normal(rng), 0.2 * normal(rng));
        }
        const PcaBasis basis = pca_fit(points);
        CHECK((basis.components * basis.components.transpose())
                  .isApprox(Eigen::Matrix3d::Identity(), 1e-10));
        CHECK(basis.explained_variance[0] >= basis.explained_variance[1]);
        CHECK(basis.explained_variance[1] >= basis.explained_variance[2]);
    }

    SUBCASE("synthetic trace concentrates on the first component") {
        SynthConfig config;
        const Trace3d trace = synth_trace(config);
        const PcaBasis basis = pca_fit(trace.points);
        const double share = basis.explained_variance[0] /
                             basis.explained_variance.sum();
        CHECK(share >= 0.99);
    }

    SUBCASE("projection round trip and centering") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> normal(0.0, 2.0);
        std::vector<Eigen::Vector3d> points;
        for (int s = 0; s < 120; ++s) {
            points.emplace_back(normal(rng) + 5.0, 0.5 * normal(rng),
                                0.1 * normal(rng) - 2.0);
        }
        const PcaBasis basis = pca_fit(points);
        const Eigen::MatrixX3d scores = pca_project(basis, points);
        const auto rebuilt = pca_reconstruct(basis, scores);
        double max_err = 0.0;
        for (std::size_t r = 0; r < points.size(); ++r) {
            max_err = std::max(max_err, (rebuilt[r] - points[r]).norm());
        }
        CHECK(max_err < 1e-10);

        const Eigen::Vector3d mean_scores =
            basis.components * (basis.mean - basis.mean);
        CHECK(mean_scores.norm() < 1e-12);

        // first-component-only reconstruction error = trailing eigenvalue sum
        double sse = 0.0;
        for (std::size_t r = 0; r < points.size(); ++r) {
            const Eigen::Vector3d partial = pca_reconstruct_point(
                basis, Eigen::Vector3d(scores(static_cast<Eigen::Index>(r), 0),
                                       0.0, 0.0));
            sse += (points[r] - partial).squaredNorm();
        }
        const double expected =
            (basis.explained_variance[1] + basis.explained_variance[2]) *
            static_cast<double>(points.size() - 1);
        CHECK(sse == doctest::Approx(expected).epsilon(1e-9));
    }

    SUBCASE("degenerate input is rejected") {
        std::vector<Eigen::Vector3d> same(10, Eigen::Vector3d(1.0, 2.0, 3.0));
        CHECK_THROWS_AS(pca_fit(same), SingularMatrixError);
        std::vector<Eigen::Vector3d> few(3, Eigen::Vector3d::Zero());
        CHECK_THROWS_AS(pca_fit(few), SeriesTooShortError);
    }
}

TEST_CASE("ridge regression") {
    SUBCASE("unpenalized residuals are orthogonal to the design") {
        std::mt19937_64 rng(4);
        const TimeSeries y = testing::sine_series(80, 11.0, 1.5, 0.4, rng);
        const int p = 4, k = 2;
        const RidgeModel model = ridge_fit(y, p, k, 0.0);

        const std::int64_t rows = y.size() - p - k + 1;
        double max_dot = 0.0;
        for (int col = 0; col <= p; ++col) {
            double dot = 0.0;
            for (std::int64_t r = 0; r < rows; ++r) {
                const std::int64_t i = y.first_index() + p - 1 + r;
                double fitted = model.beta0;
                for (int l = 0; l < p; ++l) fitted += model.beta[l] * y[i - p + 1 + l];
                const double resid = y[i + k] - fitted;
                const double regressor = col == 0 ? 1.0 : y[i - p + 1 + (col - 1)];
                dot += resid * regressor;
            }
            max_dot = std::max(max_dot, std::abs(dot));
        }
        CHECK(max_dot < 1e-8);
    }

    SUBCASE("an enormous penalty shrinks everything to zero") {
        std::mt19937_64 rng(5);
        const TimeSeries y = testing::sine_series(80, 11.0, 1.5, 0.4, rng);
        const RidgeModel model = ridge_fit(y, 4, 2, 1e12);
        CHECK(std::abs(model.beta0) < 1e-6);
        CHECK(model.beta.cwiseAbs().maxCoeff() < 1e-6);
        const Forecast fc = ridge_predict(model, y);
        CHECK(std::abs(fc.point) < 1e-5);
    }

    SUBCASE("matches a pseudo-inverse solve on a 50-row problem") {
        std::mt19937_64 rng(6);
        const int p = 3, k = 1;
        const TimeSeries y = testing::random_series(50 + p + k - 1, rng);
        const double lambda = 0.7;
        const RidgeModel model = ridge_fit(y, p, k, lambda);

        const std::int64_t rows = y.size() - p - k + 1;
        Eigen::MatrixXd design(rows, p + 1);
        Eigen::VectorXd response(rows);
        for (std::int64_t r = 0; r < rows; ++r) {
            const std::int64_t i = y.first_index() + p - 1 + r;
            design(r, 0) = 1.0;
            for (int l = 0; l < p; ++l) design(r, 1 + l) = y[i - p + 1 + l];
            response(r) = y[i + k];
        }
        Eigen::MatrixXd gram = design.transpose() * design;
        gram.diagonal().array() += lambda;
        const Eigen::VectorXd oracle = gram.inverse() * design.transpose() * response;
        CHECK(std::abs(model.beta0 - oracle(0)) < 1e-8);
        CHECK((model.beta - oracle.tail(p)).cwiseAbs().maxCoeff() < 1e-8);
    }

    SUBCASE("penalized objective is stationary at the solution") {
        std::mt19937_64 rng(7);
        const int p = 4, k = 2;
        const TimeSeries y = testing::sine_series(120, 13.0, 2.0, 0.5, rng);
        for (double lambda : {0.0, 0.3, 5.0}) {
            const RidgeModel model = ridge_fit(y, p, k, lambda);
            const std::int64_t rows = y.size() - p - k + 1;
            Eigen::MatrixXd design(rows, p + 1);
            Eigen::VectorXd response(rows);
            for (std::int64_t r = 0; r < rows; ++r) {
                const std::int64_t i = y.first_index() + p - 1 + r;
                design(r, 0) = 1.0;
                for (int l = 0; l < p; ++l) design(r, 1 + l) = y[i - p + 1 + l];
                response(r) = y[i + k];
            }
            Eigen::VectorXd coef(p + 1);
            coef(0) = model.beta0;
            coef.tail(p) = model.beta;
            const Eigen::VectorXd gradient =
                2.0 * (design.transpose() * (design * coef - response) +
                       lambda * coef);
            const double scale =
                2.0 * ((design.transpose() * response).norm() +
                       lambda * coef.norm() + 1.0);
            CHECK(gradient.norm() < 1e-6 * scale);
        }
    }

    SUBCASE("collinear rows at zero penalty raise an error") {
        const TimeSeries y(std::vector<double>(30, 2.0));
        CHECK_THROWS_AS(ridge_fit(y, 3, 1, 0.0), SingularMatrixError);
    }

    SUBCASE("prediction from zero coefficients is the intercept") {
        RidgeModel model;
        model.p = 3;
        model.k = 2;
        model.beta0 = 1.25;
        model.beta = Eigen::VectorXd::Zero(3);
        model.resid_variance = 0.5;
        std::mt19937_64 rng(8);
        const Forecast fc = ridge_predict(model, testing::random_series(10, rng));
        CHECK(fc.point == 1.25);

        const TimeSeries zeros(std::vector<double>(10, 0.0));
        RidgeModel live;
        live.p = 3;
        live.k = 2;
        live.beta0 = 0.75;
        live.beta = Eigen::VectorXd::Ones(3);
        live.resid_variance = 0.5;
        CHECK(ridge_predict(live, zeros).point == 0.75);
    }

    SUBCASE("recovers a known autoregression within ten percent noise variance") {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> normal(0.0, 0.3);
        const int k = 2;
        std::vector<double> vals(3000);
        vals[0] = 0.0;
        vals[1] = 0.1;
        for (std::size_t s = 2; s < vals.size(); ++s) {
            vals[s] = 0.5 * vals[s - k] + normal(rng);
        }
        const TimeSeries y(vals);
        const RidgeModel model = ridge_fit(y, 2, k, 0.01);
        // regressors are (Y_{i-1}, Y_i) and the target Y_{i+k} = 0.5 Y_i + e
        CHECK(model.beta[1] == doctest::Approx(0.5).epsilon(0.1));
        CHECK(model.resid_variance == doctest::Approx(0.09).epsilon(0.1));
    }
}

TEST_CASE("synthetic trace generation") {
    SUBCASE("degenerate settings give an exact sinusoid") {
        SynthConfig config;
        config.sd_period_s = 0.0;
        config.sd_amplitude_mm = 0.0;
        config.baseline_drift_mm_per_s = 0.0;
        config.noise_sd_mm = 0.0;
        config.duration_s = 40.0;
        const Trace3d trace = synth_trace(config);
        REQUIRE(trace.points.size() == 1200);

        // recover the scalar signal from the loading direction
        const Eigen::Vector3d loadings =
            Eigen::Vector3d(0.995, 0.07, 0.07).normalized();
        std::vector<double> signal;
        for (const auto& x : trace.points) signal.push_back(loadings.dot(x));

        // upward zero crossings should be one period apart
        std::vector<std::int64_t> crossings;
        for (std::size_t s = 1; s < signal.size(); ++s) {
            if (signal[s - 1] < 0.0 && signal[s] >= 0.0) {
                crossings.push_back(static_cast<std::int64_t>(s));
            }
        }
        REQUIRE(crossings.size() >= 10);
        const double expected = config.mean_period_s * config.sample_rate_hz;
        for (std::size_t c = 1; c < crossings.size(); ++c) {
            CHECK(std::abs(static_cast<double>(crossings[c] - crossings[c - 1]) -
                           expected) <= 1.0);
        }
        // peak amplitude matches the configured amplitude
        double peak = 0.0;
        for (double v : signal) peak = std::max(peak, std::abs(v));
        CHECK(peak == doctest::Approx(config.mean_amplitude_mm).epsilon(1e-3));
    }

    SUBCASE("fixed seeds reproduce and different seeds differ") {
        SynthConfig config;
        config.duration_s = 10.0;
        const Trace3d a = synth_trace(config);
        const Trace3d b = synth_trace(config);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t s = 0; s < a.points.size(); ++s) {
            CHECK(a.points[s] == b.points[s]);
        }
        SynthConfig other = config;
        other.rng_seed = 1;
        const Trace3d c = synth_trace(other);
        CHECK(a.points[10] != c.points[10]);
    }

    SUBCASE("default calibration over one hundred cycles") {
        SynthConfig config;
        config.duration_s = 400.0;  // > 100 cycles at 3.5 s
        config.baseline_drift_mm_per_s = 0.0;
        config.noise_sd_mm = 0.0;
        const TimeSeries pc1 = synth_pc1(config);
        const auto& signal = pc1.values();

        std::vector<std::int64_t> crossings;
        for (std::size_t s = 1; s < signal.size(); ++s) {
            if (signal[s - 1] < 0.0 && signal[s] >= 0.0) {
                crossings.push_back(static_cast<std::int64_t>(s));
            }
        }
        REQUIRE(crossings.size() >= 100);
        double mean_period = 0.0;
        double mean_amplitude = 0.0;
        for (std::size_t c = 1; c < crossings.size(); ++c) {
            mean_period += static_cast<double>(crossings[c] - crossings[c - 1]) /
                           config.sample_rate_hz;
            double peak = 0.0;
            for (std::int64_t s = crossings[c - 1]; s < crossings[c]; ++s) {
                peak = std::max(peak, std::abs(signal[static_cast<std::size_t>(s)]));
            }
            mean_amplitude += peak;
        }
        mean_period /= static_cast<double>(crossings.size() - 1);
        mean_amplitude /= static_cast<double>(crossings.size() - 1);
        CHECK(std::abs(mean_period - 3.5) / 3.5 < 0.10);
        CHECK(std::abs(mean_amplitude - 10.0) / 10.0 < 0.10);
    }

    SUBCASE("invalid configurations are rejected") {
        SynthConfig bad;
        bad.mean_period_s = -1.0;
        CHECK_THROWS_AS(synth_trace(bad), InvalidArgumentError);
        SynthConfig tiny;
        tiny.duration_s = 0.01;
        CHECK_THROWS_AS(synth_trace(tiny), InvalidArgumentError);
    }
}

TEST_CASE("train/test split") {
    SUBCASE("defaults on a full-length series") {
        std::mt19937_64 rng(10);
        const TimeSeries y = testing::random_series(2418, rng);
        const auto [train, test] = split_train_test(y, 1200, 1200);
        CHECK(train.size() == 1200);
        CHECK(test.size() == 1200);
        CHECK(train.first_index() == 0);
        CHECK(test.first_index() == 1200);
        CHECK(test[1200] == y[1200]);
    }
    SUBCASE("exact-length input splits without overlap") {
        std::mt19937_64 rng(11);
        const TimeSeries y = testing::random_series(20, rng);
        const auto [train, test] = split_train_test(y, 12, 8);
        CHECK(train.last_index() == 11);
        CHECK(test.first_index() == 12);
        CHECK(test.last_index() == 19);
    }
    SUBCASE("too-short input is an error") {
        std::mt19937_64 rng(12);
        const TimeSeries y = testing::random_series(19, rng);
        CHECK_THROWS_AS(split_train_test(y, 12, 8), SeriesTooShortError);
    }
}

TEST_CASE("rolling evaluation") {
    SynthConfig config;
    config.duration_s = 16.0;
    config.rng_seed = 21;
    const TimeSeries series = synth_pc1(config);  // 480 samples
    RollingOptions options;
    options.split = EvalSplit{300, 150};

    SUBCASE("a single method takes the whole best fraction") {
        auto lmar_fc = std::make_shared<LmarForecaster>(8, 60);
        const RollingResult res = rolling_evaluate(series, {lmar_fc}, 3, options);
        REQUIRE(res.table.rows.size() == 1);
        CHECK(res.table.rows[0].best_fraction == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.table.rows[0].n_predictions == 150);
        CHECK(res.table.rows[0].rmse > 0.0);
        CHECK(res.table.rows[0].coverage90 >= 0.0);
    }

    SUBCASE("an oracle scores zero error and a floored log score") {
        auto oracle = std::make_shared<OracleForecaster>(series);
        const RollingResult res = rolling_evaluate(series, {oracle}, 3, options);
        const MetricsRow& row = res.table.rows[0];
        CHECK(row.rmse == 0.0);
        CHECK(row.mae == 0.0);
        CHECK(row.best_fraction == 1.0);
        CHECK(row.mean_log_score >= -746.0);
    }

    SUBCASE("identical methods split ties in half") {
        auto a = std::make_shared<OracleForecaster>(series);
        auto b = std::make_shared<OracleForecaster>(series);
        const RollingResult res = rolling_evaluate(series, {a, b}, 3, options);
        CHECK(res.table.rows[0].best_fraction == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(res.table.rows[1].best_fraction == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(res.table.rows[0].best_fraction + res.table.rows[1].best_fraction ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("metrics do not depend on method order") {
        auto lm = [&] { return std::make_shared<LmarForecaster>(8, 60); };
        auto rg = [&] { return std::make_shared<RidgeForecaster>(8, 0.5); };
        const RollingResult ab = rolling_evaluate(series, {lm(), rg()}, 3, options);
        const RollingResult ba = rolling_evaluate(series, {rg(), lm()}, 3, options);
        for (const auto& row : ab.table.rows) {
            for (const auto& other : ba.table.rows) {
                if (other.method != row.method) continue;
                CHECK(other.rmse == row.rmse);
                CHECK(other.mae == row.mae);
                CHECK(other.best_fraction == row.best_fraction);
                CHECK(other.coverage90 == row.coverage90);
                CHECK(other.mean_log_score == row.mean_log_score);
            }
        }
    }

    SUBCASE("forecasts never see past the origin") {
        // Tampering with values after a cut only changes records at or after
        // the cut; everything earlier must be bit-identical.
        auto run = [&](const TimeSeries& s) {
            RollingOptions with_records = options;
            with_records.capture_records = true;
            auto lm = std::make_shared<LmarForecaster>(8, 60);
            auto rg = std::make_shared<RidgeForecaster>(8, 0.5);
            return rolling_evaluate(s, {lm, rg}, 3, with_records);
        };
        const std::int64_t cut = 380;  // inside the evaluation block
        std::vector<double> poisoned = series.values();
        for (std::size_t s = static_cast<std::size_t>(cut); s < poisoned.size(); ++s) {
            poisoned[s] += 1000.0;
        }
        const RollingResult clean = run(series);
        const RollingResult dirty = run(TimeSeries(poisoned, 30.0));
        REQUIRE(clean.records.size() == dirty.records.size());
        bool checked_any = false;
        for (std::size_t r = 0; r < clean.records.size(); ++r) {
            const StepRecord& c = clean.records[r];
            const StepRecord& d = dirty.records[r];
            REQUIRE(c.target == d.target);
            REQUIRE(c.method == d.method);
            if (c.target < cut) {
                // forecast origin is target - k; its inputs end before the cut
                CHECK(c.point == d.point);
                CHECK(c.lo == d.lo);
                CHECK(c.hi == d.hi);
                CHECK(c.truth == d.truth);
                checked_any = true;
            }
        }
        CHECK(checked_any);
    }

    SUBCASE("the probe sees exactly the prefix history at every step") {
        auto probe = std::make_shared<ProbeForecaster>();
        rolling_evaluate(series, {probe}, 3, options);
        REQUIRE(probe->forecast_origins_.size() == 150);
        double expected_checksum = 0.0;
        for (std::int64_t s = 0; s <= 300; ++s) expected_checksum += series[s];
        for (std::size_t step = 0; step < probe->forecast_origins_.size(); ++step) {
            const std::int64_t origin = 300 + static_cast<std::int64_t>(step);
            if (step > 0) expected_checksum += series[origin];
            CHECK(probe->forecast_origins_[step] == origin);
            CHECK(probe->checksum_at_forecast_[step] ==
                  doctest::Approx(expected_checksum).epsilon(1e-12));
        }
    }

    SUBCASE("failed methods are excluded without poisoning the comparison") {
        auto ok = std::make_shared<RidgeForecaster>(8, 0.5);
        auto broken = std::make_shared<LmarForecaster>(8, 10);  // m < 2p+1
        const RollingResult res = rolling_evaluate(series, {broken, ok}, 3, options);
        REQUIRE(res.table.rows.size() == 2);
        CHECK(res.table.rows[0].failed);
        CHECK(res.table.rows[0].n_predictions == 0);
        CHECK(!res.table.rows[1].failed);
        CHECK(res.table.rows[1].best_fraction == doctest::Approx(1.0));
    }

    SUBCASE("series shorter than split plus horizon is rejected") {
        std::mt19937_64 rng(22);
        const TimeSeries y = testing::random_series(452, rng);
        CHECK_THROWS_AS(
            rolling_evaluate(y, {std::make_shared<RidgeForecaster>(8, 0.5)}, 3,
                             options),
            SeriesTooShortError);
    }
}

TEST_CASE("grid search") {
    SynthConfig config;
    config.duration_s = 40.0;
    config.rng_seed = 33;
    const TimeSeries train = synth_pc1(config);  // 1200 samples

    SUBCASE("singleton grid echoes itself") {
        MethodGrids grids;
        LmarGrid lgrid;
        lgrid.p_values = {8};
        lgrid.m = 60;
        grids.lmar = lgrid;
        const auto best = grid_search(train, 6, grids);
        REQUIRE(best.size() == 1);
        CHECK(best[0].method == "lmar");
        CHECK(best[0].p == 8);
    }

    SUBCASE("deterministic across runs") {
        MethodGrids grids;
        RidgeGrid rgrid;
        rgrid.p_values = {5, 12};
        rgrid.lambdas = {0.1, 10.0};
        grids.ridge = rgrid;
        const auto a = grid_search(train, 6, grids);
        const auto b = grid_search(train, 6, grids);
        REQUIRE(a.size() == b.size());
        CHECK(a[0].p == b[0].p);
        CHECK(a[0].lambda == b[0].lambda);
        CHECK(a[0].mae == b[0].mae);
    }

    SUBCASE("selects the honest penalty on a linear process") {
        std::mt19937_64 rng(23);
        std::normal_distribution<double> normal(0.0, 0.2);
        std::vector<double> vals(1300);
        vals[0] = 1.0;
        for (std::size_t s = 1; s < vals.size(); ++s) {
            vals[s] = 0.9 * vals[s - 1] + normal(rng);
        }
        const TimeSeries ar(vals);
        MethodGrids grids;
        RidgeGrid rgrid;
        rgrid.p_values = {1, 3};
        rgrid.lambdas = {0.01, 1e9};
        grids.ridge = rgrid;
        const auto best = grid_search(ar, 1, grids);
        REQUIRE(best.size() == 1);
        CHECK(best[0].lambda == 0.01);

        // the selected combination is the argmin over the scored grid
        const auto scores = grid_scores(ar, 1, grids);
        for (const auto& cs : scores) {
            if (!cs.ok) continue;
            CHECK(best[0].mae <= cs.mae);
        }
    }

    SUBCASE("a grid where everything fails is an error") {
        MethodGrids grids;
        LmarGrid lgrid;
        lgrid.p_values = {200};  // m < 2p+1 for every entry
        lgrid.m = 60;
        grids.lmar = lgrid;
        CHECK_THROWS_AS(grid_search(train, 6, grids), Error);
    }

    SUBCASE("short training data is rejected") {
        std::mt19937_64 rng(24);
        const TimeSeries y = testing::random_series(1100, rng);
        CHECK_THROWS_AS(grid_search(y, 6, MethodGrids{}), SeriesTooShortError);
    }
}
