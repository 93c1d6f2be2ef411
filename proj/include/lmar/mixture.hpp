#pragma once

#include <cstdint>
#include <vector>

namespace lmar {

/// A finite Gaussian mixture with one shared variance: the conditional and
/// predictive law of the model. lag_labels records which candidate lag
/// produced each component, for diagnostics.
struct GaussianMixture {
    std::vector<double> weights;
    std::vector<double> means;
    double common_variance = 0.0;
    std::vector<std::int64_t> lag_labels;

    std::size_t size() const { return weights.size(); }

    /// Mixture mean.
    double mean() const {
        double m = 0.0;
        for (std::size_t c = 0; c < weights.size(); ++c) m += weights[c] * means[c];
        return m;
    }
};

}  // namespace lmar
