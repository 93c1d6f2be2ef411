#include "lmar/lags.hpp"

namespace lmar {

namespace {

void check_window(const TimeSeries& series, std::int64_t i, std::int64_t j,
                  int p, bool include_target) {
    if (p < 1) {
        throw InvalidArgumentError("window length parameter p must be >= 1");
    }
    const std::int64_t lowest = i - j - p;
    const std::int64_t highest = include_target ? i : i - 1;
    if (lowest < series.first_index() || highest > series.last_index()) {
        throw IndexOutOfRangeError(
            "lag window touches indices [" + std::to_string(lowest) + ", " +
            std::to_string(highest) + "] outside the observed range [" +
            std::to_string(series.first_index()) + ", " +
            std::to_string(series.last_index()) + "]");
    }
}

}  // namespace

Eigen::VectorXd lag_diff_v(const TimeSeries& series, std::int64_t i,
                           std::int64_t j, int p) {
    check_window(series, i, j, p, /*include_target=*/false);
    Eigen::VectorXd v(p);
    for (int l = 0; l < p; ++l) {
        v[l] = series[i - p + l] - series[i - j - p + l];
    }
    return v;
}

Eigen::VectorXd lag_diff_w(const TimeSeries& series, std::int64_t i,
                           std::int64_t j, int p) {
    check_window(series, i, j, p, /*include_target=*/true);
    Eigen::VectorXd w(p + 1);
    for (int l = 0; l <= p; ++l) {
        w[l] = series[i - p + l] - series[i - j - p + l];
    }
    return w;
}

}  // namespace lmar
