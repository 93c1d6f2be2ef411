#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lmar/time_series.hpp"

namespace lmar {

/// Candidate motif lags for one target index: the contiguous range
/// p+1 .. i+m-p, possibly empty. Lag j pairs the window ending at i with
/// the one ending at i-j; the lower bound keeps the two from overlapping,
/// the upper bound keeps every touched index at or above -m.
struct LagSet {
    std::int64_t target_index = 0;
    std::int64_t lo = 0;  // p+1
    std::int64_t hi = 0;  // i+m-p; empty when hi < lo

    bool empty() const { return hi < lo; }
    std::int64_t count() const { return empty() ? 0 : hi - lo + 1; }
};

inline LagSet candidate_lags(std::int64_t i, int p, std::int64_t m) {
    return LagSet{i, static_cast<std::int64_t>(p) + 1, i + m - p};
}

/// Difference between the length-p history preceding index i and the same
/// window lagged j steps. Component l (1-based) is Y_{i-p-1+l} - Y_{i-j-p-1+l},
/// so the last component is Y_{i-1} - Y_{i-j-1}.
Eigen::VectorXd lag_diff_v(const TimeSeries& series, std::int64_t i,
                           std::int64_t j, int p);

/// lag_diff_v extended by the target difference Y_i - Y_{i-j} as the last
/// component; a (p+1)-vector.
Eigen::VectorXd lag_diff_w(const TimeSeries& series, std::int64_t i,
                           std::int64_t j, int p);

}  // namespace lmar
