#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "lmar/errors.hpp"
#include "lmar/estimation.hpp"
#include "lmar/evaluate.hpp"
#include "lmar/forecast.hpp"
#include "lmar/lags.hpp"
#include "lmar/model.hpp"
#include "lmar/pca.hpp"
#include "lmar/ridge.hpp"
#include "lmar/synth.hpp"
#include "lmar/time_series.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

Eigen::MatrixX3d points_to_matrix(const std::vector<Eigen::Vector3d>& points) {
    Eigen::MatrixX3d out(points.size(), 3);
    for (std::size_t r = 0; r < points.size(); ++r) {
        out.row(r) = points[r].transpose();
    }
    return out;
}

std::vector<Eigen::Vector3d> matrix_to_points(const Eigen::MatrixX3d& m) {
    std::vector<Eigen::Vector3d> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out[static_cast<std::size_t>(r)] = m.row(r).transpose();
    }
    return out;
}

py::list table_to_rows(const lmar::MetricsTable& table) {
    py::list rows;
    for (const auto& row : table.rows) {
        py::dict d;
        d["method"] = row.method;
        d["horizon"] = row.horizon;
        d["rmse"] = row.rmse;
        d["mae"] = row.mae;
        d["best_fraction"] = row.best_fraction;
        d["coverage90"] = row.coverage90;
        d["mean_log_score"] = row.mean_log_score;
        d["n_predictions"] = row.n_predictions;
        d["failed"] = row.failed;
        rows.append(std::move(d));
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_lmar, m) {
    m.doc() = "Location-mixture autoregressive forecasting";

    py::register_exception<lmar::Error>(m, "LmarError");

    py::class_<lmar::TimeSeries>(m, "TimeSeries")
        .def(py::init<std::vector<double>, double, std::int64_t>(), "values"_a,
             "sample_rate_hz"_a = 30.0, "first_index"_a = 0)
        .def_property_readonly("values", &lmar::TimeSeries::values)
        .def_property_readonly("sample_rate_hz", &lmar::TimeSeries::sample_rate_hz)
        .def_property_readonly("first_index", &lmar::TimeSeries::first_index)
        .def("with_first_index", &lmar::TimeSeries::with_first_index)
        .def("at", &lmar::TimeSeries::at)
        .def("__len__", &lmar::TimeSeries::size);

    py::class_<lmar::MixtureParam>(m, "MixtureParam")
        .def(py::init<Eigen::MatrixXd>(), "sigma"_a)
        .def_property_readonly("matrix", &lmar::MixtureParam::matrix)
        .def_property_readonly("p", &lmar::MixtureParam::p);

    py::class_<lmar::DerivedParams>(m, "DerivedParams")
        .def_readonly("gamma", &lmar::DerivedParams::gamma)
        .def_readonly("sigma2", &lmar::DerivedParams::sigma2);

    py::class_<lmar::GaussianMixture>(m, "GaussianMixture")
        .def_readonly("weights", &lmar::GaussianMixture::weights)
        .def_readonly("means", &lmar::GaussianMixture::means)
        .def_readonly("common_variance", &lmar::GaussianMixture::common_variance)
        .def_readonly("lag_labels", &lmar::GaussianMixture::lag_labels)
        .def("mean", &lmar::GaussianMixture::mean)
        .def("__len__", &lmar::GaussianMixture::size);

    py::class_<lmar::FittedModel>(m, "FittedModel")
        .def_readonly("sigma_hat", &lmar::FittedModel::sigma_hat)
        .def_readonly("p", &lmar::FittedModel::p)
        .def_readonly("m", &lmar::FittedModel::m)
        .def_readonly("iterations", &lmar::FittedModel::iterations)
        .def_readonly("monitor_trace", &lmar::FittedModel::monitor_trace)
        .def_readonly("exact_loglik_final", &lmar::FittedModel::exact_loglik_final)
        .def_readonly("converged", &lmar::FittedModel::converged)
        .def_readonly("best_iterate_used", &lmar::FittedModel::best_iterate_used);

    py::class_<lmar::PredictionInterval>(m, "PredictionInterval")
        .def_readonly("lo", &lmar::PredictionInterval::lo)
        .def_readonly("hi", &lmar::PredictionInterval::hi)
        .def_readonly("level", &lmar::PredictionInterval::level);

    py::class_<lmar::Forecast>(m, "Forecast")
        .def_readonly("horizon_k", &lmar::Forecast::horizon_k)
        .def_readonly("mixture", &lmar::Forecast::mixture)
        .def_readonly("point", &lmar::Forecast::point)
        .def_readonly("interval", &lmar::Forecast::interval);

    py::class_<lmar::RidgeModel>(m, "RidgeModel")
        .def_readonly("p", &lmar::RidgeModel::p)
        .def_readonly("k", &lmar::RidgeModel::k)
        .def_readonly("lambda_", &lmar::RidgeModel::lambda)
        .def_readonly("beta0", &lmar::RidgeModel::beta0)
        .def_readonly("beta", &lmar::RidgeModel::beta)
        .def_readonly("resid_variance", &lmar::RidgeModel::resid_variance);

    py::class_<lmar::PcaBasis>(m, "PcaBasis")
        .def_readonly("mean", &lmar::PcaBasis::mean)
        .def_readonly("components", &lmar::PcaBasis::components)
        .def_readonly("explained_variance", &lmar::PcaBasis::explained_variance);

    py::class_<lmar::SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("mean_period_s", &lmar::SynthConfig::mean_period_s)
        .def_readwrite("sd_period_s", &lmar::SynthConfig::sd_period_s)
        .def_readwrite("mean_amplitude_mm", &lmar::SynthConfig::mean_amplitude_mm)
        .def_readwrite("sd_amplitude_mm", &lmar::SynthConfig::sd_amplitude_mm)
        .def_readwrite("baseline_drift_mm_per_s",
                       &lmar::SynthConfig::baseline_drift_mm_per_s)
        .def_readwrite("noise_sd_mm", &lmar::SynthConfig::noise_sd_mm)
        .def_readwrite("duration_s", &lmar::SynthConfig::duration_s)
        .def_readwrite("sample_rate_hz", &lmar::SynthConfig::sample_rate_hz)
        .def_readwrite("rng_seed", &lmar::SynthConfig::rng_seed);

    m.def("candidate_lags", [](std::int64_t i, int p, std::int64_t m_len) {
        const lmar::LagSet lags = lmar::candidate_lags(i, p, m_len);
        return py::make_tuple(lags.lo, lags.hi);
    }, "i"_a, "p"_a, "m"_a);

    m.def("derive_params", &lmar::derive_params, "sigma"_a);

    m.def("conditional_mixture", &lmar::conditional_mixture, "series"_a, "i"_a,
          "sigma"_a, "m"_a);

    m.def("simulate", &lmar::simulate, "sigma"_a, "m"_a, "seed_history"_a,
          "n_steps"_a, "rng_seed"_a);

    m.def("exact_cond_loglik", &lmar::exact_cond_loglik, "series"_a, "sigma"_a,
          "m"_a);
    m.def("approx_obs_loglik", &lmar::approx_obs_loglik, "series"_a, "sigma"_a,
          "m"_a);

    m.def(
        "fit",
        [](const lmar::TimeSeries& series, int p, std::int64_t m_len,
           double rel_tol, int max_iter) {
            lmar::FitConfig config;
            config.rel_tol = rel_tol;
            config.max_iter = max_iter;
            return lmar::fit(series, p, m_len, config);
        },
        "series"_a, "p"_a, "m"_a, "rel_tol"_a = 1e-4, "max_iter"_a = 100);

    m.def("predictive_distribution", &lmar::predictive_distribution,
          "history"_a, "model"_a, "k"_a);
    m.def("point_forecast", &lmar::point_forecast, "mixture"_a);
    m.def("mixture_cdf", &lmar::mixture_cdf, "mixture"_a, "y"_a);
    m.def("mixture_quantile", &lmar::mixture_quantile, "mixture"_a, "q"_a);
    m.def("prediction_interval", &lmar::prediction_interval, "mixture"_a,
          "level"_a);
    m.def("log_score", &lmar::log_score, "mixture"_a, "y_true"_a);
    m.def("make_forecast", &lmar::make_forecast, "mixture"_a, "k"_a, "level"_a);

    m.def("ridge_fit", &lmar::ridge_fit, "train"_a, "p"_a, "k"_a, "lambda_"_a,
          "penalize_intercept"_a = true);
    m.def("ridge_predict", &lmar::ridge_predict, "model"_a, "history"_a,
          "level"_a = 0.9);

    m.def("pca_fit", [](const Eigen::MatrixX3d& points) {
        return lmar::pca_fit(matrix_to_points(points));
    }, "points"_a);
    m.def("pca_project", [](const lmar::PcaBasis& basis,
                            const Eigen::MatrixX3d& points) {
        return lmar::pca_project(basis, matrix_to_points(points));
    }, "basis"_a, "points"_a);
    m.def("pca_reconstruct", [](const lmar::PcaBasis& basis,
                                const Eigen::MatrixX3d& scores) {
        return points_to_matrix(lmar::pca_reconstruct(basis, scores));
    }, "basis"_a, "scores"_a);

    m.def("synth_trace", [](const lmar::SynthConfig& config) {
        const lmar::Trace3d trace = lmar::synth_trace(config);
        return py::make_tuple(points_to_matrix(trace.points),
                              trace.sample_rate_hz);
    }, "config"_a);

    m.def("split_train_test", &lmar::split_train_test, "series"_a,
          "train_len"_a, "test_len"_a);

    m.def(
        "rolling_evaluate",
        [](const lmar::TimeSeries& series, const py::list& methods, int k,
           std::int64_t train_len, std::int64_t test_len, double level) {
            std::vector<std::shared_ptr<lmar::Forecaster>> forecasters;
            for (const auto& item : methods) {
                const py::dict spec = item.cast<py::dict>();
                const std::string name = spec["method"].cast<std::string>();
                if (name == "lmar") {
                    forecasters.push_back(std::make_shared<lmar::LmarForecaster>(
                        spec["p"].cast<int>(), spec["m"].cast<std::int64_t>()));
                } else if (name == "ridge") {
                    forecasters.push_back(std::make_shared<lmar::RidgeForecaster>(
                        spec["p"].cast<int>(), spec["lambda"].cast<double>()));
                } else {
                    throw lmar::InvalidArgumentError("unknown method " + name);
                }
            }
            lmar::RollingOptions options;
            options.split = lmar::EvalSplit{train_len, test_len};
            options.level = level;
            const lmar::RollingResult result =
                lmar::rolling_evaluate(series, forecasters, k, options);
            return table_to_rows(result.table);
        },
        "series"_a, "methods"_a, "k"_a, "train_len"_a = 1200,
        "test_len"_a = 1200, "level"_a = 0.9);
}
