// Command-line front end: fit, predict, evaluate, tune, simulate.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmar/errors.hpp"
#include "lmar/evaluate.hpp"
#include "lmar/forecast.hpp"
#include "lmar/io.hpp"
#include "lmar/model.hpp"
#include "lmar/pca.hpp"
#include "lmar/synth.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int exit_code_for(const lmar::Error& e) {
    if (dynamic_cast<const lmar::BadInputError*>(&e)) return 2;
    if (dynamic_cast<const lmar::BadSeriesError*>(&e)) return 3;
    if (dynamic_cast<const lmar::SeriesTooShortError*>(&e)) return 3;
    if (dynamic_cast<const lmar::HorizonError*>(&e)) return 5;
    if (dynamic_cast<const lmar::InvalidArgumentError*>(&e)) return 2;
    if (dynamic_cast<const lmar::InvalidProbabilityError*>(&e)) return 2;
    return 4;
}

const char* rule_for(const lmar::Error& e) {
    if (dynamic_cast<const lmar::BadInputError*>(&e)) return "bad-input-file";
    if (dynamic_cast<const lmar::BadSeriesError*>(&e)) return "bad-trace";
    if (dynamic_cast<const lmar::SeriesTooShortError*>(&e)) return "series-too-short";
    if (dynamic_cast<const lmar::HorizonError*>(&e)) return "horizon-out-of-range";
    if (dynamic_cast<const lmar::InvalidArgumentError*>(&e)) return "bad-arguments";
    if (dynamic_cast<const lmar::InvalidProbabilityError*>(&e)) return "bad-arguments";
    return "numeric-failure";
}

struct Preprocessed {
    lmar::TimeSeries series;  // first principal component for 3D input
    std::optional<lmar::PcaBasis> basis;
    double last_pc2 = 0.0;
    double last_pc3 = 0.0;
};

// 3D traces are reduced to their first principal component; the basis is fit
// on the first `basis_len` points only (or all points when 0).
Preprocessed preprocess(const lmar::TraceData& trace, std::int64_t basis_len) {
    if (!trace.is_3d) {
        return Preprocessed{
            lmar::TimeSeries(trace.values, trace.sample_rate_hz), {}, 0.0, 0.0};
    }
    const auto n = static_cast<std::int64_t>(trace.points.size());
    const std::int64_t fit_n = basis_len > 0 ? std::min(basis_len, n) : n;
    const std::vector<Eigen::Vector3d> head(trace.points.begin(),
                                            trace.points.begin() + fit_n);
    const lmar::PcaBasis basis = lmar::pca_fit(head);
    const Eigen::MatrixX3d scores = lmar::pca_project(basis, trace.points);
    std::vector<double> pc1(scores.rows());
    for (Eigen::Index r = 0; r < scores.rows(); ++r) pc1[r] = scores(r, 0);
    Preprocessed out{lmar::TimeSeries(std::move(pc1), trace.sample_rate_hz),
                     basis, scores(scores.rows() - 1, 1),
                     scores(scores.rows() - 1, 2)};
    return out;
}

double first_diff_variance(const lmar::TimeSeries& series) {
    const auto& y = series.values();
    if (y.size() < 3) return 0.0;
    double mean = 0.0;
    for (std::size_t t = 0; t + 1 < y.size(); ++t) mean += y[t + 1] - y[t];
    mean /= static_cast<double>(y.size() - 1);
    double ss = 0.0;
    for (std::size_t t = 0; t + 1 < y.size(); ++t) {
        const double d = (y[t + 1] - y[t]) - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(y.size() - 2);
}

int parallelism_cap() {
    if (const char* env = std::getenv("LMAR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
    std::string input;
    std::string out;
    int p = 22;
    std::int64_t m = 400;
    double tol = 1e-4;
    int max_iter = 100;
};

int run_fit(const FitArgs& args) {
    const auto trace = lmar::read_trace(args.input);
    const auto pre = preprocess(trace, 0);

    if (first_diff_variance(pre.series) < 1e-7) {
        std::cerr << "warning[near-constant-series]: covariance will be "
                     "floored at 1e-8\n";
    }

    lmar::FitConfig config;
    config.rel_tol = args.tol;
    config.max_iter = args.max_iter;

    const auto t0 = std::chrono::steady_clock::now();
    const lmar::FittedModel model = lmar::fit(pre.series, args.p, args.m, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    lmar::ModelFile file;
    file.model_kind = "lmar";
    file.sample_rate_hz = pre.series.sample_rate_hz();
    file.lmar = model;
    file.pca = pre.basis;

    std::string out = args.out;
    if (out.empty()) {
        out = std::filesystem::path(args.input)
                  .replace_extension(".model.json")
                  .string();
    }
    lmar::save_model(out, file);

    std::cout << "iterations=" << model.iterations
              << " converged=" << (model.converged ? "true" : "false")
              << " best_iterate_used="
              << (model.best_iterate_used ? "true" : "false")
              << " monitor_final=" << fmt(model.monitor_trace.back())
              << " exact_loglik=" << fmt(model.exact_loglik_final)
              << " seconds=" << fmt(seconds) << "\n";
    std::cout << "model=" << out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictArgs {
    std::string model;
    std::string history;
    std::vector<int> horizons{1};
    double level = 0.9;
};

int run_predict(const PredictArgs& args) {
    const lmar::ModelFile file = lmar::load_model(args.model);
    const auto trace = lmar::read_trace(args.history);
    if (file.pca && !trace.is_3d) {
        throw lmar::BadInputError("model carries a 3D basis; history is 1D");
    }

    Preprocessed pre;
    if (file.pca) {
        const Eigen::MatrixX3d scores = lmar::pca_project(*file.pca, trace.points);
        std::vector<double> pc1(scores.rows());
        for (Eigen::Index r = 0; r < scores.rows(); ++r) pc1[r] = scores(r, 0);
        pre = Preprocessed{lmar::TimeSeries(std::move(pc1), trace.sample_rate_hz),
                           *file.pca, scores(scores.rows() - 1, 1),
                           scores(scores.rows() - 1, 2)};
    } else {
        pre = preprocess(trace, 0);
    }

    std::cout << "k,point_mm,lo_mm,hi_mm,level";
    if (file.pca) std::cout << ",x_mm,y_mm,z_mm";
    std::cout << "\n";

    for (int k : args.horizons) {
        lmar::Forecast fc;
        if (file.model_kind == "lmar") {
            if (!file.lmar) throw lmar::BadInputError("model file lacks parameters");
            const lmar::GaussianMixture mix =
                lmar::predictive_distribution(pre.series, *file.lmar, k);
            fc = lmar::make_forecast(mix, k, args.level);
        } else if (file.model_kind == "ridge") {
            if (!file.ridge) throw lmar::BadInputError("model file lacks parameters");
            if (k != file.ridge->k) {
                throw lmar::HorizonError(
                    "ridge model was fit for k=" + std::to_string(file.ridge->k) +
                    ", requested k=" + std::to_string(k));
            }
            fc = lmar::ridge_predict(*file.ridge, pre.series, args.level);
        } else {
            throw lmar::BadInputError("unknown model_kind " + file.model_kind);
        }

        std::cout << k << ',' << fmt(fc.point) << ',' << fmt(fc.interval.lo)
                  << ',' << fmt(fc.interval.hi) << ',' << fmt(args.level);
        if (file.pca) {
            const Eigen::Vector3d xyz = lmar::pca_reconstruct_point(
                *file.pca, Eigen::Vector3d(fc.point, pre.last_pc2, pre.last_pc3));
            std::cout << ',' << fmt(xyz[0]) << ',' << fmt(xyz[1]) << ','
                      << fmt(xyz[2]);
        }
        std::cout << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::vector<std::string> inputs;
    std::vector<std::string> methods{"lmar", "ridge"};
    std::vector<int> horizons{6, 12, 18};
    double train_s = 40.0;
    double test_s = 40.0;
    int lmar_p = 22;
    std::int64_t lmar_m = 400;
    int ridge_p = 22;
    double ridge_lambda = 1.0;
    std::string out;
    std::string dump_forecasts;
};

struct SeriesOutcome {
    std::vector<lmar::MetricsRow> rows;  // per (method, horizon)
    std::vector<lmar::StepRecord> records;
    bool excluded = false;
    std::string reason;
    int error_code = 0;
};

SeriesOutcome evaluate_one(const std::string& path, const EvaluateArgs& args) {
    SeriesOutcome outcome;
    try {
        const auto trace = lmar::read_trace(path);
        const auto train_len = static_cast<std::int64_t>(
            std::llround(args.train_s * trace.sample_rate_hz));
        const auto test_len = static_cast<std::int64_t>(
            std::llround(args.test_s * trace.sample_rate_hz));
        const auto pre = preprocess(trace, train_len);

        lmar::RollingOptions options;
        options.split = lmar::EvalSplit{train_len, test_len};
        options.capture_records = !args.dump_forecasts.empty();

        for (int k : args.horizons) {
            std::vector<std::shared_ptr<lmar::Forecaster>> methods;
            for (const auto& name : args.methods) {
                if (name == "lmar") {
                    methods.push_back(std::make_shared<lmar::LmarForecaster>(
                        args.lmar_p, args.lmar_m));
                } else if (name == "ridge") {
                    methods.push_back(std::make_shared<lmar::RidgeForecaster>(
                        args.ridge_p, args.ridge_lambda));
                } else {
                    throw lmar::InvalidArgumentError("unknown method " + name);
                }
            }
            auto result = lmar::rolling_evaluate(pre.series, methods, k, options);
            for (auto& row : result.table.rows) {
                outcome.rows.push_back(std::move(row));
            }
            for (auto& rec : result.records) {
                outcome.records.push_back(std::move(rec));
            }
        }
    } catch (const lmar::Error& e) {
        outcome.excluded = true;
        outcome.reason = std::string(rule_for(e)) + ": " + e.what();
        outcome.error_code = exit_code_for(e);
    }
    return outcome;
}

int run_evaluate(const EvaluateArgs& args) {
    const auto n_series = args.inputs.size();
    std::vector<SeriesOutcome> outcomes(n_series);

    const int workers =
        std::min<int>(parallelism_cap(), static_cast<int>(n_series));
    if (workers <= 1) {
        for (std::size_t s = 0; s < n_series; ++s) {
            outcomes[s] = evaluate_one(args.inputs[s], args);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t s = next.fetch_add(1);
                if (s >= n_series) break;
                outcomes[s] = evaluate_one(args.inputs[s], args);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "series,method,horizon,rmse,mae,best,coverage90,log_ps,n\n";
    std::size_t evaluated = 0;
    int first_error = 0;
    for (std::size_t s = 0; s < n_series; ++s) {
        const auto& outcome = outcomes[s];
        if (outcome.excluded) {
            std::cerr << "excluded[" << outcome.reason << "]: " << args.inputs[s]
                      << "\n";
            if (first_error == 0) first_error = outcome.error_code;
            continue;
        }
        ++evaluated;
        for (const auto& row : outcome.rows) {
            csv << args.inputs[s] << ',' << row.method << ',' << row.horizon
                << ',' << fmt(row.rmse) << ',' << fmt(row.mae) << ','
                << fmt(row.best_fraction) << ',' << fmt(row.coverage90) << ','
                << fmt(row.mean_log_score) << ',' << row.n_predictions << "\n";
        }
    }

    // Aggregate rows: average of per-series metrics for each method/horizon.
    for (const auto& name : args.methods) {
        for (int k : args.horizons) {
            double rmse = 0, mae = 0, best = 0, cov = 0, ls = 0;
            std::int64_t n = 0;
            int count = 0;
            for (const auto& outcome : outcomes) {
                if (outcome.excluded) continue;
                for (const auto& row : outcome.rows) {
                    if (row.method != name || row.horizon != k || row.failed) {
                        continue;
                    }
                    rmse += row.rmse;
                    mae += row.mae;
                    best += row.best_fraction;
                    cov += row.coverage90;
                    ls += row.mean_log_score;
                    n += row.n_predictions;
                    ++count;
                }
            }
            if (count > 0) {
                const double c = count;
                csv << "ALL," << name << ',' << k << ',' << fmt(rmse / c) << ','
                    << fmt(mae / c) << ',' << fmt(best / c) << ',' << fmt(cov / c)
                    << ',' << fmt(ls / c) << ',' << n << "\n";
            }
        }
    }

    if (!args.dump_forecasts.empty()) {
        std::ofstream dump(args.dump_forecasts, std::ios::binary);
        if (!dump) {
            throw lmar::BadInputError("cannot write " + args.dump_forecasts);
        }
        dump << "series,method,target,point,truth,lo,hi,log_score\n";
        for (std::size_t s = 0; s < n_series; ++s) {
            for (const auto& rec : outcomes[s].records) {
                dump << args.inputs[s] << ',' << rec.method << ',' << rec.target
                     << ',' << fmt(rec.point) << ',' << fmt(rec.truth) << ','
                     << fmt(rec.lo) << ',' << fmt(rec.hi) << ','
                     << fmt(rec.log_score) << "\n";
            }
        }
    }

    if (args.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw lmar::BadInputError("cannot write " + args.out);
        out << csv.str();
    }

    if (evaluated == 0) {
        return first_error != 0 ? first_error : 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// tune
// ---------------------------------------------------------------------------

struct TuneArgs {
    std::vector<std::string> inputs;
    std::string method = "lmar";
    int k = 12;
    double train_s = 40.0;
    std::vector<int> lmar_p_grid{8, 11, 15, 22, 30};
    std::int64_t lmar_m = 400;
    std::vector<int> ridge_p_grid{10, 22, 45};
    std::vector<double> ridge_lambda_grid{0.01, 0.1, 1.0, 10.0};
};

int run_tune(const TuneArgs& args) {
    lmar::MethodGrids grids;
    if (args.method == "lmar") {
        lmar::LmarGrid grid;
        grid.p_values = args.lmar_p_grid;
        grid.m = args.lmar_m;
        grids.lmar = grid;
    } else if (args.method == "ridge") {
        lmar::RidgeGrid grid;
        grid.p_values = args.ridge_p_grid;
        grid.lambdas = args.ridge_lambda_grid;
        grids.ridge = grid;
    } else {
        throw lmar::InvalidArgumentError("unknown method " + args.method);
    }

    // Scores averaged across series, combo by combo.
    std::vector<lmar::ComboScore> total;
    std::size_t used = 0;
    for (const auto& path : args.inputs) {
        const auto trace = lmar::read_trace(path);
        const auto train_len = static_cast<std::int64_t>(
            std::llround(args.train_s * trace.sample_rate_hz));
        const auto pre = preprocess(trace, train_len);
        if (pre.series.size() < train_len) {
            throw lmar::SeriesTooShortError("trace " + path +
                                            " shorter than the training window");
        }
        const auto scores =
            lmar::grid_scores(pre.series.prefix(train_len), args.k, grids);
        if (total.empty()) {
            total = scores;
        } else {
            for (std::size_t c = 0; c < total.size(); ++c) {
                total[c].ok = total[c].ok && scores[c].ok;
                total[c].mae += scores[c].mae;
                total[c].rmse += scores[c].rmse;
            }
        }
        ++used;
    }
    if (used == 0) throw lmar::BadInputError("no input traces given");
    for (auto& cs : total) {
        cs.mae /= static_cast<double>(used);
        cs.rmse /= static_cast<double>(used);
    }
    const auto best = lmar::select_best(total);

    json doc;
    doc["format_version"] = 1;
    doc["method"] = args.method;
    doc["k"] = args.k;
    doc["n_series"] = used;
    json best_node;
    best_node["p"] = best.front().p;
    if (args.method == "ridge") best_node["lambda"] = best.front().lambda;
    if (args.method == "lmar") best_node["m"] = args.lmar_m;
    doc["best"] = best_node;
    json score;
    score["mae"] = best.front().mae;
    score["rmse"] = best.front().rmse;
    doc["score"] = score;
    std::cout << doc.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string model;
    std::string history;
    std::string synth_config;
    std::int64_t n = 1200;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
};

lmar::SynthConfig parse_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lmar::BadInputError("cannot open config " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw lmar::BadInputError("malformed config " + path + ": " + e.what());
    }
    lmar::SynthConfig cfg;
    try {
        if (doc.contains("mean_period_s")) cfg.mean_period_s = doc["mean_period_s"];
        if (doc.contains("sd_period_s")) cfg.sd_period_s = doc["sd_period_s"];
        if (doc.contains("mean_amplitude_mm"))
            cfg.mean_amplitude_mm = doc["mean_amplitude_mm"];
        if (doc.contains("sd_amplitude_mm"))
            cfg.sd_amplitude_mm = doc["sd_amplitude_mm"];
        if (doc.contains("baseline_drift_mm_per_s"))
            cfg.baseline_drift_mm_per_s = doc["baseline_drift_mm_per_s"];
        if (doc.contains("noise_sd_mm")) cfg.noise_sd_mm = doc["noise_sd_mm"];
        if (doc.contains("duration_s")) cfg.duration_s = doc["duration_s"];
        if (doc.contains("sample_rate_hz")) cfg.sample_rate_hz = doc["sample_rate_hz"];
        if (doc.contains("rng_seed")) cfg.rng_seed = doc["rng_seed"];
    } catch (const json::exception& e) {
        throw lmar::BadInputError("mistyped field in config " + path + ": " +
                                  e.what());
    }
    return cfg;
}

int run_simulate(const SimulateArgs& args) {
    if (args.out.empty()) {
        throw lmar::InvalidArgumentError("--out is required");
    }
    if (!args.synth_config.empty()) {
        lmar::SynthConfig cfg = parse_synth_config(args.synth_config);
        if (args.seed_given) cfg.rng_seed = args.seed;
        lmar::write_trace_3d(args.out, lmar::synth_trace(cfg));
        return 0;
    }
    if (args.model.empty() || args.history.empty()) {
        throw lmar::InvalidArgumentError(
            "either --synth-config or both --model and --history are required");
    }
    const lmar::ModelFile file = lmar::load_model(args.model);
    if (file.model_kind != "lmar" || !file.lmar) {
        throw lmar::BadInputError("simulation requires an lmar model file");
    }
    const auto trace = lmar::read_trace(args.history);
    Preprocessed pre;
    if (file.pca) {
        if (!trace.is_3d) {
            throw lmar::BadInputError("model carries a 3D basis; history is 1D");
        }
        const Eigen::MatrixX3d scores = lmar::pca_project(*file.pca, trace.points);
        std::vector<double> pc1(scores.rows());
        for (Eigen::Index r = 0; r < scores.rows(); ++r) pc1[r] = scores(r, 0);
        pre.series = lmar::TimeSeries(std::move(pc1), trace.sample_rate_hz);
    } else {
        pre = preprocess(trace, 0);
    }
    const std::int64_t m = file.lmar->m;
    if (pre.series.size() < m) {
        throw lmar::SeriesTooShortError("history shorter than m = " +
                                        std::to_string(m));
    }
    const auto& v = pre.series.values();
    const lmar::TimeSeries seed_history(
        std::vector<double>(v.end() - m, v.end()), pre.series.sample_rate_hz());
    const lmar::TimeSeries path = lmar::simulate(
        file.lmar->sigma_hat, m, seed_history, args.n, args.seed);
    lmar::write_trace_1d(args.out, path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location-mixture autoregressive forecasting toolkit"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Estimate a model from a trace");
    fit_cmd->add_option("input", fit_args.input, "Trace CSV")->required();
    fit_cmd->add_option("--p", fit_args.p, "Window length parameter");
    fit_cmd->add_option("--m", fit_args.m, "Conditioning length");
    fit_cmd->add_option("--tol", fit_args.tol, "Relative monitor tolerance");
    fit_cmd->add_option("--max-iter", fit_args.max_iter, "Iteration cap");
    fit_cmd->add_option("--out", fit_args.out, "Model JSON path");

    PredictArgs predict_args;
    auto* predict_cmd =
        app.add_subcommand("predict", "Forecast from a fitted model");
    predict_cmd->add_option("--model", predict_args.model, "Model JSON")
        ->required();
    predict_cmd->add_option("--history", predict_args.history, "Trace CSV")
        ->required();
    predict_cmd->add_option("--k", predict_args.horizons, "Horizons (steps)")
        ->delimiter(',');
    predict_cmd->add_option("--level", predict_args.level, "Interval level");

    EvaluateArgs eval_args;
    auto* eval_cmd =
        app.add_subcommand("evaluate", "Rolling out-of-sample comparison");
    eval_cmd->add_option("inputs", eval_args.inputs, "Trace CSVs")->required();
    eval_cmd->add_option("--methods", eval_args.methods, "Methods to compare")
        ->delimiter(',');
    eval_cmd->add_option("--horizons", eval_args.horizons, "Horizons (steps)")
        ->delimiter(',');
    eval_cmd->add_option("--train-s", eval_args.train_s, "Training seconds");
    eval_cmd->add_option("--test-s", eval_args.test_s, "Evaluation seconds");
    eval_cmd->add_option("--lmar-p", eval_args.lmar_p, "LMAR window parameter");
    eval_cmd->add_option("--lmar-m", eval_args.lmar_m, "LMAR conditioning length");
    eval_cmd->add_option("--ridge-p", eval_args.ridge_p, "Ridge lag count");
    eval_cmd->add_option("--ridge-lambda", eval_args.ridge_lambda,
                         "Ridge penalty");
    eval_cmd->add_option("--out", eval_args.out, "Metrics CSV path (stdout)");
    eval_cmd->add_option("--dump-forecasts", eval_args.dump_forecasts,
                         "Per-step forecast CSV path");

    TuneArgs tune_args;
    auto* tune_cmd = app.add_subcommand("tune", "Grid-search hyperparameters");
    tune_cmd->add_option("inputs", tune_args.inputs, "Trace CSVs")->required();
    tune_cmd->add_option("--method", tune_args.method, "lmar or ridge");
    tune_cmd->add_option("--k", tune_args.k, "Horizon (steps)");
    tune_cmd->add_option("--train-s", tune_args.train_s, "Training seconds");
    tune_cmd->add_option("--lmar-p-grid", tune_args.lmar_p_grid, "LMAR p grid")
        ->delimiter(',');
    tune_cmd->add_option("--lmar-m", tune_args.lmar_m, "LMAR conditioning length");
    tune_cmd->add_option("--ridge-p-grid", tune_args.ridge_p_grid, "Ridge p grid")
        ->delimiter(',');
    tune_cmd
        ->add_option("--ridge-lambda-grid", tune_args.ridge_lambda_grid,
                     "Ridge lambda grid")
        ->delimiter(',');

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Write a simulated trace");
    sim_cmd->add_option("--model", sim_args.model, "Model JSON");
    sim_cmd->add_option("--history", sim_args.history, "Seed trace CSV");
    sim_cmd->add_option("--synth-config", sim_args.synth_config,
                        "Generator config JSON");
    sim_cmd->add_option("--n", sim_args.n, "Steps to simulate");
    auto* seed_opt = sim_cmd->add_option("--seed", sim_args.seed, "RNG seed");
    sim_cmd->add_option("--out", sim_args.out, "Output trace CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[bad-arguments]: " << e.what() << "\n";
        return 2;
    }

    sim_args.seed_given = seed_opt->count() > 0;

    try {
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (predict_cmd->parsed()) return run_predict(predict_args);
        if (eval_cmd->parsed()) return run_evaluate(eval_args);
        if (tune_cmd->parsed()) return run_tune(tune_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
    } catch (const lmar::Error& e) {
        std::cerr << "error[" << rule_for(e) << "]: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error[numeric-failure]: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
