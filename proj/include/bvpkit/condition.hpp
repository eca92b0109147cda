#pragma once

#include <array>
#include <optional>
#include <string>

#include "bvpkit/errors.hpp"

namespace bvpkit {

/// The four robot-session conditions. Ordered A < B < C < D so that
/// iteration over conditions is deterministic everywhere.
enum class Condition : int { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<Condition, 4> kAllConditions = {
    Condition::A, Condition::B, Condition::C, Condition::D};

inline constexpr int condition_index(Condition c) { return static_cast<int>(c); }

inline char condition_letter(Condition c) {
    return static_cast<char>('A' + condition_index(c));
}

inline std::string to_string(Condition c) { return std::string(1, condition_letter(c)); }

/// Case-insensitive parse of a single condition letter.
inline std::optional<Condition> parse_condition(const std::string& s) {
    if (s.size() != 1) return std::nullopt;
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    if (c < 'A' || c > 'D') return std::nullopt;
    return static_cast<Condition>(c - 'A');
}

/// Self-reported robot familiarity, 0 (none) through 3 (intermediate).
class ExperienceLevel {
public:
    explicit ExperienceLevel(int value) : value_(value) {
        if (value < 0 || value > 3)
            throw DataError("experience level must be in [0,3], got " + std::to_string(value));
    }
    int value() const { return value_; }
    friend bool operator==(ExperienceLevel a, ExperienceLevel b) { return a.value_ == b.value_; }
    friend bool operator<(ExperienceLevel a, ExperienceLevel b) { return a.value_ < b.value_; }

private:
    int value_;
};

}  // namespace bvpkit
