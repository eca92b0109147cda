#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bvpkit/condition.hpp"
#include "bvpkit/hypothesis.hpp"

namespace bvpkit::stats {

/// The five questionnaire constructs scored after each condition.
enum class PerceivedFeature : int { PS = 0, AP = 1, AM = 2, LK = 3, PI = 4 };

inline constexpr std::array<PerceivedFeature, 5> kAllFeatures = {
    PerceivedFeature::PS, PerceivedFeature::AP, PerceivedFeature::AM, PerceivedFeature::LK,
    PerceivedFeature::PI};

std::string to_string(PerceivedFeature f);
std::optional<PerceivedFeature> parse_feature(const std::string& s);

struct ScoreRow {
    std::string participant;
    Condition condition;
    ExperienceLevel experience;
    PerceivedFeature feature;
    double score;
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
};

/// Parse `participant,condition,experience,feature,score` CSV.
ScoreTable load_score_table(std::istream& in);
ScoreTable load_score_table(const std::string& text);
std::string write_score_table(const ScoreTable& table);

/// Per-group descriptive stats plus a Bonferroni-adjusted confidence
/// interval for the standard deviation.
struct GroupStats {
    std::string key;  ///< condition letter or experience digit
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased
    double std_ci_lower = 0.0;
    double std_ci_upper = 0.0;
    bool degenerate = false;  ///< zero variance; interval collapsed to a point
};

struct VarianceTestResult {
    HypothesisTestResult test;  ///< Levene, Brown-Forsythe (median-centered)
    std::vector<GroupStats> groups;
};

/// Brown-Forsythe equality-of-variances test across groups, plus
/// per-group std confidence intervals at joint level 1-alpha
/// (chi-square intervals at alpha/k each).
VarianceTestResult variance_test(const std::vector<std::vector<double>>& groups, double alpha);

enum class AnovaMethod { Classic, Welch };

struct AnovaResult {
    AnovaMethod method = AnovaMethod::Classic;
    double f_statistic = 0.0;
    double df_between = 0.0;
    double df_within = 0.0;  ///< fractional for Welch
    double p_value = 1.0;
    bool degenerate = false;  ///< zero variance everywhere with equal means
    std::vector<GroupStats> group_stats;
    std::vector<std::string> ordering;  ///< group keys by descending mean
    /// Present when the Welch-vs-classic choice was made automatically.
    std::optional<HypothesisTestResult> variance_pretest;
};

/// One-way fixed-effects ANOVA, p-value from the F survival function.
AnovaResult anova_classic(const std::vector<std::vector<double>>& groups);

/// Welch's heteroscedastic one-way ANOVA; every group needs nonzero
/// variance (weights are n_i / s_i^2).
AnovaResult anova_welch(const std::vector<std::vector<double>>& groups);

/// Condition main effect for one feature over all four conditions:
/// variance test first, Welch when it rejects, classic otherwise.
/// `force_method` overrides the automatic choice.
AnovaResult feature_condition_analysis(const ScoreTable& table, PerceivedFeature feature,
                                       double alpha,
                                       std::optional<AnovaMethod> force_method = std::nullopt);

/// Experience-level main effect for one (feature, condition) cell, same
/// variance-test-then-ANOVA policy. Levels with fewer than 2 observations
/// are skipped; at least 2 populated levels are required.
AnovaResult experience_analysis(const ScoreTable& table, PerceivedFeature feature,
                                Condition condition, double alpha,
                                std::optional<AnovaMethod> force_method = std::nullopt);

/// Deterministic synthetic questionnaire table: 30 participants, every
/// condition and feature populated, engineered group means/variances so
/// the full analysis battery has known qualitative outcomes.
ScoreTable make_demo_score_table(std::uint64_t seed);

}  // namespace bvpkit::stats
