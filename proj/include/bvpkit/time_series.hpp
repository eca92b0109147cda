#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvpkit/condition.hpp"
#include "bvpkit/errors.hpp"

namespace bvpkit {

/// Uniformly sampled scalar signal. Immutable after construction;
/// the constructor enforces non-empty, finite samples and a positive rate.
class TimeSeries {
public:
    TimeSeries(std::vector<double> samples, double sample_rate_hz, double start_time = 0.0,
               std::optional<Condition> condition = std::nullopt)
        : samples_(std::move(samples)),
          sample_rate_hz_(sample_rate_hz),
          start_time_(start_time),
          condition_(condition) {
        if (samples_.empty()) throw DataError("TimeSeries: samples must be non-empty");
        if (!(sample_rate_hz_ > 0.0))
            throw DataError("TimeSeries: sample rate must be positive, got " +
                            std::to_string(sample_rate_hz_));
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!std::isfinite(samples_[i]))
                throw DataError("TimeSeries: non-finite sample at index " + std::to_string(i));
        }
    }

    const std::vector<double>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double sample_rate_hz() const { return sample_rate_hz_; }
    double start_time() const { return start_time_; }
    const std::optional<Condition>& condition() const { return condition_; }

    TimeSeries with_condition(Condition c) const {
        return TimeSeries(samples_, sample_rate_hz_, start_time_, c);
    }

private:
    std::vector<double> samples_;
    double sample_rate_hz_;
    double start_time_;
    std::optional<Condition> condition_;
};

}  // namespace bvpkit
