#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lmar/estimation.hpp"
#include "lmar/pca.hpp"
#include "lmar/ridge.hpp"
#include "lmar/synth.hpp"
#include "lmar/time_series.hpp"

namespace lmar {

/// Parsed trace file: rows of (t_seconds, x_mm, y_mm, z_mm) or
/// (t_seconds, value_mm) under a mandatory header. Timestamps must be
/// strictly increasing and uniformly spaced within 1e-6 s; anything else is
/// rejected as gapped.
struct TraceData {
    bool is_3d = false;
    std::vector<Eigen::Vector3d> points;  // when 3d
    std::vector<double> values;           // when 1d
    double sample_rate_hz = 30.0;
};

TraceData read_trace(const std::string& path);

void write_trace_1d(const std::string& path, const TimeSeries& series);

void write_trace_3d(const std::string& path, const Trace3d& trace);

/// Persisted model: format_version, kind, the numeric parameters, fit
/// diagnostics and (for 3D inputs) the projection basis. Numeric fields
/// survive a save/load round trip exactly.
struct ModelFile {
    int format_version = 1;
    std::string model_kind;  // "lmar" | "ridge"
    double sample_rate_hz = 30.0;
    std::optional<FittedModel> lmar;
    std::optional<RidgeModel> ridge;
    std::optional<PcaBasis> pca;
};

void save_model(const std::string& path, const ModelFile& model);

ModelFile load_model(const std::string& path);

}  // namespace lmar
