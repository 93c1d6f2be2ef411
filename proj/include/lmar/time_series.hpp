#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lmar/errors.hpp"

namespace lmar {

/// An evenly sampled scalar series (mm) with a signed index axis.
///
/// Observations occupy consecutive integer indices
/// `first_index() .. last_index()`. Negative indices name the conditioning
/// stretch that precedes the modeled targets, so a series conditioned on m
/// past values runs -m..n. The single storage mapping is
/// `storage position = index - first_index()`; everything else speaks
/// indices.
class TimeSeries {
public:
    TimeSeries() = default;

    TimeSeries(std::vector<double> values, double sample_rate_hz = 30.0,
               std::int64_t first_index = 0)
        : values_(std::move(values)),
          sample_rate_hz_(sample_rate_hz),
          first_index_(first_index) {
        validate();
    }

    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    std::int64_t first_index() const { return first_index_; }
    std::int64_t last_index() const { return first_index_ + size() - 1; }
    double sample_rate_hz() const { return sample_rate_hz_; }

    bool contains(std::int64_t index) const {
        return index >= first_index_ && index <= last_index();
    }

    /// Value at a series index; throws IndexOutOfRangeError when absent.
    double at(std::int64_t index) const {
        if (!contains(index)) {
            throw IndexOutOfRangeError("series index " + std::to_string(index) +
                                       " outside [" + std::to_string(first_index_) +
                                       ", " + std::to_string(last_index()) + "]");
        }
        return values_[static_cast<std::size_t>(index - first_index_)];
    }

    /// Unchecked access for hot loops; index must be within range.
    double operator[](std::int64_t index) const {
        return values_[static_cast<std::size_t>(index - first_index_)];
    }

    const std::vector<double>& values() const { return values_; }

    /// Same observations, re-addressed so the first one sits at `first_index`.
    TimeSeries with_first_index(std::int64_t first_index) const {
        return TimeSeries(values_, sample_rate_hz_, first_index);
    }

    /// The first `count` observations (indices preserved).
    TimeSeries prefix(std::int64_t count) const {
        if (count < 1 || count > size()) {
            throw IndexOutOfRangeError("prefix of " + std::to_string(count) +
                                       " from series of length " +
                                       std::to_string(size()));
        }
        return TimeSeries(
            std::vector<double>(values_.begin(), values_.begin() + count),
            sample_rate_hz_, first_index_);
    }

    void append(double value) {
        if (!std::isfinite(value)) {
            throw InvalidArgumentError("appended value must be finite");
        }
        values_.push_back(value);
    }

private:
    void validate() const {
        if (values_.empty()) {
            throw InvalidArgumentError("time series must hold at least one value");
        }
        if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
            throw InvalidArgumentError("sample rate must be a positive real");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw InvalidArgumentError("time series values must be finite");
            }
        }
    }

    std::vector<double> values_;
    double sample_rate_hz_ = 30.0;
    std::int64_t first_index_ = 0;
};

}  // namespace lmar
