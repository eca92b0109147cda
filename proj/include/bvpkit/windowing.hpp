#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bvpkit/condition.hpp"
#include "bvpkit/time_series.hpp"

namespace bvpkit::windowing {

/// Fixed window length p (samples) and stride j (samples).
struct WindowSpec {
    std::size_t window_len_p = 512;
    std::size_t stride_j = 128;

    void validate() const;
};

/// Stride over window length; smaller means more overlap between
/// consecutive windows.
double effective_length(const WindowSpec& spec);

/// Number of windows a series of length n contributes: floor((n-p)/j)+1,
/// or 0 when n < p. Trailing partial windows are dropped.
std::size_t window_count(std::size_t n, const WindowSpec& spec);

/// Fixed-length windows stacked row-major, one condition label and one
/// source id (participant) per row.
struct WindowSet {
    std::vector<double> values;  ///< count x p, row-major
    std::vector<Condition> labels;
    std::vector<std::string> participants;  ///< per row; empty string when unknown
    WindowSpec spec;
    std::vector<std::string> warnings;  ///< e.g. series too short to contribute

    std::size_t count() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * spec.window_len_p, spec.window_len_p};
    }
};

/// Split every labeled series into windows [i*j, i*j + p). Ordering is
/// (series order, then window index); windows never cross series.
///
/// A series shorter than p contributes nothing and records a warning;
/// if no series is long enough a DataError is thrown. Unlabeled series
/// are rejected.
WindowSet segment(const std::vector<TimeSeries>& series, const WindowSpec& spec);

/// Same, with one participant id per input series carried onto its rows.
WindowSet segment(const std::vector<TimeSeries>& series,
                  const std::vector<std::string>& participants, const WindowSpec& spec);

enum class ScaleMode { NegOneOne, ZeroOne };

struct RescaledWindow {
    std::vector<double> values;
    ScaleMode mode = ScaleMode::NegOneOne;
    bool degenerate = false;  ///< source window was constant; mapped to midpoint
};

/// Min-max rescale of one window.
///   NegOneOne: ((x - max) + (x - min)) / (max - min), into [-1, 1]
///   ZeroOne:   (x - min) / (max - min),               into [0, 1]
/// Outputs are clamped to the closed target range. A constant window maps
/// to the range midpoint and is flagged degenerate.
RescaledWindow rescale(std::span<const double> window, ScaleMode mode);

}  // namespace bvpkit::windowing
