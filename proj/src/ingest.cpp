#include "bvpkit/ingest.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>
#include <utility>

#include "bvpkit/errors.hpp"
#include "bvpkit/rng.hpp"

namespace bvpkit::ingest {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// Whole-token real parse; rejects trailing garbage like "1.0x".
bool parse_real(const std::string& token, double& out) {
    const std::string t = trim(token);
    if (t.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(t, &pos);
        return pos == t.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

}  // namespace

std::array<ConditionSignalParams, 4> SyntheticConfig::default_condition_params() {
    std::array<ConditionSignalParams, 4> p;
    const double freqs[4] = {1.0, 1.2, 1.4, 1.6};
    for (int i = 0; i < 4; ++i) {
        p[i].cardiac_hz = freqs[i];
        p[i].amplitude = 1.0;
        p[i].harmonic_ratio = 0.5;
        p[i].resp_mod_depth = 0.3;
        p[i].noise_std = 0.05;
        p[i].wander_std = 0.01;
    }
    return p;
}

void SyntheticConfig::validate() const {
    if (!(duration_s > 0.0)) throw DataError("SyntheticConfig: duration_s must be positive");
    if (!(sample_rate_hz > 0.0))
        throw DataError("SyntheticConfig: sample_rate_hz must be positive");
    for (Condition c : kAllConditions) {
        const auto& p = per_condition[condition_index(c)];
        if (p.cardiac_hz < 0.5 || p.cardiac_hz > 3.0)
            throw DataError("SyntheticConfig: cardiac_hz for condition " + to_string(c) +
                            " must be in [0.5, 3.0], got " + std::to_string(p.cardiac_hz));
        if (p.noise_std < 0.0)
            throw DataError("SyntheticConfig: noise_std must be >= 0 for condition " +
                            to_string(c));
        if (p.wander_std < 0.0)
            throw DataError("SyntheticConfig: wander_std must be >= 0 for condition " +
                            to_string(c));
    }
}

TimeSeries parse_e4_bvp(std::istream& in) {
    std::string line;
    double start_time = 0.0;
    double rate = 0.0;

    if (!std::getline(in, line))
        throw FormatError("BVP file truncated: missing start-timestamp header (line 1)");
    if (!parse_real(strip_cr(line), start_time))
        throw FormatError("BVP file: malformed start timestamp at line 1: '" + strip_cr(line) +
                          "'");

    if (!std::getline(in, line))
        throw FormatError("BVP file truncated: missing sample-rate header (line 2)");
    if (!parse_real(strip_cr(line), rate) || !(rate > 0.0))
        throw FormatError("BVP file: malformed sample rate at line 2: '" + strip_cr(line) + "'");

    std::vector<double> samples;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(strip_cr(line));
        if (t.empty()) continue;  // tolerate a trailing blank line
        double v = 0.0;
        if (!parse_real(t, v))
            throw FormatError("BVP file: non-numeric sample at line " + std::to_string(line_no) +
                              ": '" + t + "'");
        samples.push_back(v);
    }
    if (samples.empty()) throw DataError("BVP file: header present but no samples follow");

    return TimeSeries(std::move(samples), rate, start_time);
}

TimeSeries parse_e4_bvp(const std::string& text) {
    std::istringstream in(text);
    return parse_e4_bvp(in);
}

std::string write_e4_bvp(const TimeSeries& series) {
    std::string out;
    out.reserve(series.size() * 12 + 32);
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.9g\n", v);
        out += buf;
    };
    put(series.start_time());
    put(series.sample_rate_hz());
    for (double v : series.samples()) put(v);
    return out;
}

SessionManifest load_manifest(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("manifest: empty file");
    const auto header = split_csv_row(strip_cr(line));
    const std::vector<std::string> expected = {"path", "participant", "condition", "experience"};
    if (header.size() != expected.size())
        throw FormatError("manifest: expected header 'path,participant,condition,experience'");
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (header[i] != expected[i])
            throw FormatError("manifest: unexpected header column '" + header[i] + "'");

    SessionManifest manifest;
    std::set<std::pair<std::string, int>> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(strip_cr(line));
        if (stripped.empty()) continue;
        const auto f = split_csv_row(stripped);
        if (f.size() != 4)
            throw FormatError("manifest: line " + std::to_string(line_no) + " has " +
                              std::to_string(f.size()) + " fields, expected 4");
        if (f[1].empty())
            throw DataError("manifest: empty participant id at line " + std::to_string(line_no));
        const auto cond = parse_condition(f[2]);
        if (!cond)
            throw DataError("manifest: unknown condition '" + f[2] + "' at line " +
                            std::to_string(line_no));
        double exp_raw = 0.0;
        if (!parse_real(f[3], exp_raw) || exp_raw != std::floor(exp_raw))
            throw DataError("manifest: experience must be an integer at line " +
                            std::to_string(line_no));
        const int exp = static_cast<int>(exp_raw);
        if (exp < 0 || exp > 3)
            throw DataError("manifest: experience " + std::to_string(exp) +
                            " outside 0-3 at line " + std::to_string(line_no));
        if (!seen.insert({f[1], condition_index(*cond)}).second)
            throw DataError("manifest: duplicate (participant, condition) pair (" + f[1] + ", " +
                            to_string(*cond) + ") at line " + std::to_string(line_no));
        manifest.entries.push_back(SessionEntry{f[0], f[1], *cond, ExperienceLevel(exp)});
    }
    return manifest;
}

SessionManifest load_manifest(const std::string& text) {
    std::istringstream in(text);
    return load_manifest(in);
}

TimeSeries generate_synthetic_session(const SyntheticConfig& cfg, Condition condition) {
    cfg.validate();
    const auto& p = cfg.per_condition[condition_index(condition)];
    const auto n = static_cast<std::size_t>(cfg.duration_s * cfg.sample_rate_hz);
    if (n == 0) throw DataError("synthetic session would be empty");

    GaussianSampler noise(mix_seed(cfg.seed, static_cast<std::uint64_t>(condition_index(condition))));

    std::vector<double> samples(n);
    double wander = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / cfg.sample_rate_hz;
        const double fundamental = p.amplitude * std::sin(kTwoPi * p.cardiac_hz * t);
        const double harmonic = p.amplitude * p.harmonic_ratio *
                                std::sin(2.0 * kTwoPi * p.cardiac_hz * t) *
                                (1.0 + p.resp_mod_depth * std::sin(kTwoPi * 0.25 * t));
        if (p.wander_std > 0.0) wander += p.wander_std * noise.next();
        const double eps = p.noise_std > 0.0 ? p.noise_std * noise.next() : 0.0;
        samples[i] = fundamental + harmonic + wander + eps;
    }
    return TimeSeries(std::move(samples), cfg.sample_rate_hz, 0.0, condition);
}

}  // namespace bvpkit::ingest
