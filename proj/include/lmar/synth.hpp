#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lmar {

/// Generator settings for quasi-periodic 3D test traces: a sinusoid whose
/// amplitude and period are redrawn each cycle, a linear-plus-random-walk
/// baseline, and white observation noise. The scalar signal is loaded onto
/// three axes with fixed weights so the first principal direction carries
/// nearly all the variance.
struct SynthConfig {
    double mean_period_s = 3.5;
    double sd_period_s = 0.6;
    double mean_amplitude_mm = 10.0;
    double sd_amplitude_mm = 2.0;
    double baseline_drift_mm_per_s = 0.05;
    double noise_sd_mm = 0.15;
    double duration_s = 80.0;
    double sample_rate_hz = 30.0;
    std::uint64_t rng_seed = 0;
};

struct Trace3d {
    std::vector<Eigen::Vector3d> points;
    double sample_rate_hz = 30.0;
};

/// Deterministic per seed. The random-walk step scale is tied to the drift
/// rate (|drift| per second split across samples), so a zero drift yields a
/// flat baseline.
Trace3d synth_trace(const SynthConfig& config);

}  // namespace lmar
