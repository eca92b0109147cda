#include "bvpkit/windowing.hpp"

#include <algorithm>
#include <limits>

#include "bvpkit/errors.hpp"

namespace bvpkit::windowing {

void WindowSpec::validate() const {
    if (window_len_p < 2)
        throw DataError("WindowSpec: window length must be >= 2, got " +
                        std::to_string(window_len_p));
    if (stride_j == 0) throw DataError("WindowSpec: stride must be positive");
}

double effective_length(const WindowSpec& spec) {
    spec.validate();
    return static_cast<double>(spec.stride_j) / static_cast<double>(spec.window_len_p);
}

std::size_t window_count(std::size_t n, const WindowSpec& spec) {
    if (n < spec.window_len_p) return 0;
    return (n - spec.window_len_p) / spec.stride_j + 1;
}

WindowSet segment(const std::vector<TimeSeries>& series,
                  const std::vector<std::string>& participants, const WindowSpec& spec) {
    spec.validate();
    if (!participants.empty() && participants.size() != series.size())
        throw DataError("segment: participants list must match series list");

    WindowSet out;
    out.spec = spec;

    const std::size_t p = spec.window_len_p;
    const std::size_t j = spec.stride_j;

    std::size_t total = 0;
    for (std::size_t s = 0; s < series.size(); ++s) total += window_count(series[s].size(), spec);
    out.values.reserve(total * p);
    out.labels.reserve(total);
    out.participants.reserve(total);

    for (std::size_t s = 0; s < series.size(); ++s) {
        const TimeSeries& ts = series[s];
        if (!ts.condition())
            throw DataError("segment: series " + std::to_string(s) + " has no condition label");
        const std::size_t n = ts.size();
        const std::size_t k = window_count(n, spec);
        if (k == 0) {
            out.warnings.push_back("series " + std::to_string(s) + " (n=" + std::to_string(n) +
                                   ") shorter than window length " + std::to_string(p) +
                                   "; contributed no windows");
            continue;
        }
        const std::string& who = participants.empty() ? std::string() : participants[s];
        const auto& x = ts.samples();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t start = i * j;
            out.values.insert(out.values.end(), x.begin() + start, x.begin() + start + p);
            out.labels.push_back(*ts.condition());
            out.participants.push_back(who);
        }
    }
    if (out.labels.empty())
        throw DataError("segment: no series long enough for window length " + std::to_string(p));
    return out;
}

WindowSet segment(const std::vector<TimeSeries>& series, const WindowSpec& spec) {
    return segment(series, {}, spec);
}

RescaledWindow rescale(std::span<const double> window, ScaleMode mode) {
    if (window.empty()) throw DataError("rescale: empty window");

    const auto [lo_it, hi_it] = std::minmax_element(window.begin(), window.end());
    const double lo = *lo_it, hi = *hi_it;

    RescaledWindow out;
    out.mode = mode;
    out.values.resize(window.size());

    if (lo == hi) {
        const double mid = mode == ScaleMode::NegOneOne ? 0.0 : 0.5;
        std::fill(out.values.begin(), out.values.end(), mid);
        out.degenerate = true;
        return out;
    }

    const double range = hi - lo;
    for (std::size_t i = 0; i < window.size(); ++i) {
        double v;
        if (mode == ScaleMode::NegOneOne) {
            v = ((window[i] - hi) + (window[i] - lo)) / range;
            v = std::clamp(v, -1.0, 1.0);
        } else {
            v = (window[i] - lo) / range;
            v = std::clamp(v, 0.0, 1.0);
        }
        out.values[i] = v;
    }
    return out;
}

}  // namespace bvpkit::windowing
