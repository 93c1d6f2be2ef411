#include "lmar/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "lmar/errors.hpp"

namespace lmar {

namespace {

void validate(const SynthConfig& c) {
    if (!(c.mean_period_s > 0.0) || !(c.mean_amplitude_mm > 0.0) ||
        !(c.sample_rate_hz > 0.0) || !(c.duration_s > 0.0)) {
        throw InvalidArgumentError("periods, amplitudes, rate and duration must be positive");
    }
    if (c.sd_period_s < 0.0 || c.sd_amplitude_mm < 0.0 || c.noise_sd_mm < 0.0) {
        throw InvalidArgumentError("spread parameters must be nonnegative");
    }
    if (c.duration_s * c.sample_rate_hz < 2.0) {
        throw InvalidArgumentError("duration times rate must be at least 2 samples");
    }
}

}  // namespace

Trace3d synth_trace(const SynthConfig& config) {
    validate(config);
    const auto n = static_cast<std::int64_t>(
        std::llround(config.duration_s * config.sample_rate_hz));
    const double dt = 1.0 / config.sample_rate_hz;

    std::mt19937_64 rng(config.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const Eigen::Vector3d loadings =
        Eigen::Vector3d(0.995, 0.07, 0.07).normalized();
    const double rw_step =
        std::abs(config.baseline_drift_mm_per_s) / config.sample_rate_hz;

    auto draw_period = [&] {
        const double raw =
            config.mean_period_s + config.sd_period_s * normal(rng);
        return std::max(raw, std::max(2.0 * dt, 0.1 * config.mean_period_s));
    };
    auto draw_amplitude = [&] {
        const double raw =
            config.mean_amplitude_mm + config.sd_amplitude_mm * normal(rng);
        return std::max(raw, 0.0);
    };

    Trace3d trace;
    trace.sample_rate_hz = config.sample_rate_hz;
    trace.points.reserve(static_cast<std::size_t>(n));

    double phase = 0.0;  // in [0, 1), one breath per unit
    double period = draw_period();
    double amplitude = draw_amplitude();
    double walk = 0.0;

    for (std::int64_t s = 0; s < n; ++s) {
        const double t = static_cast<double>(s) * dt;
        const double core =
            amplitude * std::sin(2.0 * std::numbers::pi * phase) +
            config.baseline_drift_mm_per_s * t + walk;
        Eigen::Vector3d point = loadings * core;
        if (config.noise_sd_mm > 0.0) {
            for (int a = 0; a < 3; ++a) {
                point[a] += config.noise_sd_mm * normal(rng);
            }
        }
        trace.points.push_back(point);

        phase += dt / period;
        if (phase >= 1.0) {
            phase -= 1.0;
            period = draw_period();
            amplitude = draw_amplitude();
        }
        if (rw_step > 0.0) {
            walk += rw_step * normal(rng);
        }
    }
    return trace;
}

}  // namespace lmar
