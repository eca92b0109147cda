#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bvpkit/condition.hpp"
#include "bvpkit/time_series.hpp"

namespace bvpkit::ingest {

/// One manifest row: where a session file lives and how it is labeled.
struct SessionEntry {
    std::string path;
    std::string participant;
    Condition condition;
    ExperienceLevel experience;
};

struct SessionManifest {
    std::vector<SessionEntry> entries;
};

/// Signal parameters for one synthetic condition.
struct ConditionSignalParams {
    double cardiac_hz = 1.0;      ///< fundamental pulse frequency
    double amplitude = 1.0;       ///< peak amplitude of the fundamental
    double harmonic_ratio = 0.5;  ///< second-harmonic amplitude relative to fundamental
    double resp_mod_depth = 0.3;  ///< depth of the 0.25 Hz respiratory modulation
    double noise_std = 0.05;      ///< additive white Gaussian noise
    double wander_std = 0.0;      ///< per-sample std of random-walk baseline wander
};

/// Reproducible stand-in for wristband recordings: identical seed and
/// config give bit-identical samples.
struct SyntheticConfig {
    std::uint64_t seed = 0;
    double duration_s = 120.0;
    double sample_rate_hz = 64.0;
    std::array<ConditionSignalParams, 4> per_condition = default_condition_params();

    /// Cardiac frequencies 1.0/1.2/1.4/1.6 Hz so the four classes are
    /// separable; small wander keeps long recordings wristband-like.
    static std::array<ConditionSignalParams, 4> default_condition_params();

    void validate() const;
};

/// Parse a wristband BVP export: line 1 = UTC start timestamp, line 2 =
/// sample rate (Hz), every further line one sample. LF or CRLF accepted.
///
/// Throws FormatError naming the offending line, DataError when the file
/// has headers but no samples.
TimeSeries parse_e4_bvp(std::istream& in);
TimeSeries parse_e4_bvp(const std::string& text);

/// Inverse of parse_e4_bvp up to 9-significant-digit number formatting.
std::string write_e4_bvp(const TimeSeries& series);

/// Parse a session manifest CSV with header
/// `path,participant,condition,experience`.
SessionManifest load_manifest(std::istream& in);
SessionManifest load_manifest(const std::string& text);

/// Synthesize one labeled session:
///   A*sin(2*pi*f*t) + A*h*sin(4*pi*f*t) * (1 + m*sin(2*pi*0.25*t))
/// plus optional random-walk wander and white noise, all seeded per
/// (seed, condition) so sessions for different conditions are independent.
TimeSeries generate_synthetic_session(const SyntheticConfig& cfg, Condition condition);

}  // namespace bvpkit::ingest
