#include "bvpkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "bvpkit/errors.hpp"
#include "bvpkit/mathfn.hpp"
#include "bvpkit/rng.hpp"

namespace bvpkit::stats {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double unbiased_variance(const std::vector<double>& v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (v[n / 2 - 1] + hi);
}

void require_groups(const std::vector<std::vector<double>>& groups, const char* who) {
    if (groups.size() < 2)
        throw DataError(std::string(who) + ": need at least 2 groups, got " +
                        std::to_string(groups.size()));
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].size() < 2)
            throw DataError(std::string(who) + ": group " + std::to_string(i) +
                            " has fewer than 2 observations");
        for (double x : groups[i])
            if (!std::isfinite(x))
                throw DataError(std::string(who) + ": non-finite score in group " +
                                std::to_string(i));
    }
}

std::vector<GroupStats> describe_groups(const std::vector<std::vector<double>>& groups,
                                        const std::vector<std::string>& keys, double alpha) {
    // Bonferroni split: each of the k intervals at level 1 - alpha/k, so
    // the k intervals hold jointly at >= 1 - alpha.
    const double a_each = alpha / static_cast<double>(groups.size());
    std::vector<GroupStats> out;
    out.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        GroupStats g;
        g.key = keys[i];
        g.n = groups[i].size();
        g.mean = mean_of(groups[i]);
        g.variance = unbiased_variance(groups[i], g.mean);
        const double df = static_cast<double>(g.n - 1);
        const double s = std::sqrt(g.variance);
        if (g.variance == 0.0) {
            g.degenerate = true;
            g.std_ci_lower = g.std_ci_upper = 0.0;
        } else {
            g.std_ci_lower = s * std::sqrt(df / mathfn::chi2_quantile(1.0 - a_each / 2.0, df));
            g.std_ci_upper = s * std::sqrt(df / mathfn::chi2_quantile(a_each / 2.0, df));
        }
        out.push_back(g);
    }
    return out;
}

std::vector<std::string> ordering_by_mean(const std::vector<GroupStats>& groups) {
    std::vector<std::size_t> idx(groups.size());
    std::iota(idx.begin(), idx.end(), 0);
    // stable: ties keep enumeration order
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return groups[a].mean > groups[b].mean; });
    std::vector<std::string> keys;
    keys.reserve(idx.size());
    for (std::size_t i : idx) keys.push_back(groups[i].key);
    return keys;
}

std::vector<std::string> default_keys(std::size_t k) {
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < k; ++i) keys.push_back("g" + std::to_string(i));
    return keys;
}

AnovaResult run_policy(const std::vector<std::vector<double>>& groups,
                       const std::vector<std::string>& keys, double alpha,
                       std::optional<AnovaMethod> force_method) {
    const auto pretest = variance_test(groups, alpha);
    const AnovaMethod method = force_method.value_or(
        pretest.test.decision == Decision::RejectNull ? AnovaMethod::Welch : AnovaMethod::Classic);
    AnovaResult res = method == AnovaMethod::Welch ? anova_welch(groups) : anova_classic(groups);
    res.variance_pretest = pretest.test;
    res.group_stats = describe_groups(groups, keys, alpha);
    res.ordering = ordering_by_mean(res.group_stats);
    return res;
}

}  // namespace

std::string to_string(PerceivedFeature f) {
    switch (f) {
        case PerceivedFeature::PS: return "PS";
        case PerceivedFeature::AP: return "AP";
        case PerceivedFeature::AM: return "AM";
        case PerceivedFeature::LK: return "LK";
        case PerceivedFeature::PI: return "PI";
    }
    return "?";
}

std::optional<PerceivedFeature> parse_feature(const std::string& s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (PerceivedFeature f : kAllFeatures)
        if (u == to_string(f)) return f;
    return std::nullopt;
}

ScoreTable load_score_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("score table: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "participant,condition,experience,feature,score")
        throw FormatError(
            "score table: expected header 'participant,condition,experience,feature,score'");

    ScoreTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string participant, cond_s, exp_s, feat_s, score_s;
        if (!std::getline(row, participant, ',') || !std::getline(row, cond_s, ',') ||
            !std::getline(row, exp_s, ',') || !std::getline(row, feat_s, ',') ||
            !std::getline(row, score_s))
            throw FormatError("score table: malformed row at line " + std::to_string(line_no));
        const auto cond = parse_condition(cond_s);
        if (!cond)
            throw DataError("score table: unknown condition '" + cond_s + "' at line " +
                            std::to_string(line_no));
        const auto feat = parse_feature(feat_s);
        if (!feat)
            throw DataError("score table: unknown feature '" + feat_s + "' at line " +
                            std::to_string(line_no));
        int exp = 0;
        double score = 0.0;
        try {
            exp = std::stoi(exp_s);
            score = std::stod(score_s);
        } catch (const std::exception&) {
            throw FormatError("score table: non-numeric field at line " + std::to_string(line_no));
        }
        if (!std::isfinite(score))
            throw DataError("score table: non-finite score at line " + std::to_string(line_no));
        table.rows.push_back(ScoreRow{participant, *cond, ExperienceLevel(exp), *feat, score});
    }
    return table;
}

ScoreTable load_score_table(const std::string& text) {
    std::istringstream in(text);
    return load_score_table(in);
}

std::string write_score_table(const ScoreTable& table) {
    std::string out = "participant,condition,experience,feature,score\n";
    char buf[96];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%s,%.9g\n", r.participant.c_str(),
                      to_string(r.condition).c_str(), r.experience.value(),
                      to_string(r.feature).c_str(), r.score);
        out += buf;
    }
    return out;
}

VarianceTestResult variance_test(const std::vector<std::vector<double>>& groups, double alpha) {
    require_groups(groups, "variance_test");
    const std::size_t k = groups.size();
    std::size_t n_total = 0;
    for (const auto& g : groups) n_total += g.size();

    // Brown-Forsythe: absolute deviations from the group median.
    std::vector<std::vector<double>> z(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double med = median_of(groups[i]);
        z[i].reserve(groups[i].size());
        for (double x : groups[i]) z[i].push_back(std::fabs(x - med));
    }

    double grand = 0.0;
    std::vector<double> zbar(k);
    for (std::size_t i = 0; i < k; ++i) {
        zbar[i] = mean_of(z[i]);
        grand += zbar[i] * static_cast<double>(z[i].size());
    }
    grand /= static_cast<double>(n_total);

    double between = 0.0, within = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        between += static_cast<double>(z[i].size()) * (zbar[i] - grand) * (zbar[i] - grand);
        for (doublev : z[i]) within += (v - zbar[i]) * (v - zbar[i]);
    }

    const double df1 = static_cast<double>(k - 1);
    const double df2 = static_cast<double>(n_total - k);
    double w, p;
    if (between == 0.0) {
        w = 0.0;
        p = 1.0;
    } else if (within == 0.0) {
        w = std::numeric_limits<double>::infinity();
        p = 0.0;
    } else {
        w = (df2 / df1) * (between / within);
        p = mathfn::f_sf(w, df1, df2);
    }

    VarianceTestResult out;
    out.test = make_test_result(w, p, alpha);
    out.groups = describe_groups(groups, default_keys(k), alpha);
    return out;
}

AnovaResult anova_classic(const std::vector<std::vector<double>>& groups) {
    require_groups(groups, "anova_classic");
    const std::size_t k = groups.size();
    std::size_t n_total = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        n_total += g.size();
        grand_sum = std::accumulate(g.begin(), g.end(), grand_sum);
    }
    const double grand_mean = grand_sum / static_cast<double>(n_total);

    double ss_between = 0.0, ss_within = 0.0;
    for (const auto& g : groups) {
        const double m = mean_of(g);
        ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
        for (double x : g) ss_within += (x - m) * (x - m);
    }

    AnovaResult res;
    res.method = AnovaMethod::Classic;
    res.df_between = static_cast<double>(k - 1);
    res.df_within = static_cast<double>(n_total - k);
    const double ms_between = ss_between / res.df_between;
    const double ms_within = ss_within / res.df_within;

    if (ms_within == 0.0) {
        if (ms_between == 0.0) {
            // every observation identical: F is 0/0
            res.degenerate = true;
            res.f_statistic = 0.0;
            res.p_value = 1.0;
        } else {
            res.f_statistic = std::numeric_limits<double>::infinity();
            res.p_value = 0.0;
        }
    } else {
        res.f_statistic = ms_between / ms_within;
        res.p_value = mathfn::f_sf(res.f_statistic, res.df_between, res.df_within);
    }
    res.group_stats = describe_groups(groups, default_keys(k), 0.05);
    res.ordering = ordering_by_mean(res.group_stats);
    return res;
}

AnovaResult anova_welch(const std::vector<std::vector<double>>& groups) {
    require_groups(groups, "anova_welch");
    const std::size_t k = groups.size();

    std::vector<double> w(k), m(k);
    double w_sum = 0.0, wm_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        m[i] = mean_of(groups[i]);
        const double var = unbiased_variance(groups[i], m[i]);
        if (var == 0.0)
            throw DegenerateInputError("anova_welch: group " + std::to_string(i) +
                                       " has zero variance; weights undefined");
        w[i] = static_cast<double>(groups[i].size()) / var;
        w_sum += w[i];
        wm_sum += w[i] * m[i];
    }
    const double grand = wm_sum / w_sum;

    const double kf = static_cast<double>(k);
    double num = 0.0;
    for (std::size_t i = 0; i < k; ++i) num += w[i] * (m[i] - grand) * (m[i] - grand);
    num /= kf - 1.0;

    double lambda = 0.0;  // sum (1 - w_i/W)^2 / (n_i - 1)
    for (std::size_t i = 0; i < k; ++i) {
        const double frac = 1.0 - w[i] / w_sum;
        lambda += frac * frac / static_cast<double>(groups[i].size() - 1);
    }
    const double denom = 1.0 + (2.0 * (kf - 2.0) / (kf * kf - 1.0)) * lambda;

    AnovaResult res;
    res.method = AnovaMethod::Welch;
    res.df_between = kf - 1.0;
    res.df_within = (kf * kf - 1.0) / (3.0 * lambda);  // Welch-Satterthwaite
    res.f_statistic = num / denom;
    res.p_value = mathfn::f_sf(res.f_statistic, res.df_between, res.df_within);
    res.group_stats = describe_groups(groups, default_keys(k), 0.05);
    res.ordering = ordering_by_mean(res.group_stats);
    return res;
}

AnovaResult feature_condition_analysis(const ScoreTable& table, PerceivedFeature feature,
                                       double alpha, std::optional<AnovaMethod> force_method) {
    std::vector<std::vector<double>> groups(4);
    for (const auto& r : table.rows)
        if (r.feature == feature) groups[condition_index(r.condition)].push_back(r.score);
    std::vector<std::string> keys;
    for (Condition c : kAllConditions) {
        if (groups[condition_index(c)].size() < 2)
            throw DataError("feature_condition_analysis: condition " + to_string(c) +
                            " missing/underpopulated for feature " + to_string(feature));
        keys.push_back(to_string(c));
    }
    return run_policy(groups, keys, alpha, force_method);
}

AnovaResult experience_analysis(const ScoreTable& table, PerceivedFeature feature,
                                Condition condition, double alpha,
                                std::optional<AnovaMethod> force_method) {
    std::map<int, std::vector<double>> by_level;
    for (const auto& r : table.rows)
        if (r.feature == feature && r.condition == condition)
            by_level[r.experience.value()].push_back(r.score);

    std::vector<std::vector<double>> groups;
    std::vector<std::string> keys;
    for (auto& [level, scores] : by_level) {
        if (scores.size() < 2) continue;  // not testable
        groups.push_back(std::move(scores));
        keys.push_back(std::to_string(level));
    }
    if (groups.size() < 2)
        throw DataError("experience_analysis: fewer than 2 populated experience levels for (" +
                        to_string(feature) + ", condition " + to_string(condition) + ")");
    return run_policy(groups, keys, alpha, force_method);
}

ScoreTable make_demo_score_table(std::uint64_t seed) {
    // Group means chosen so every condition main effect has a known
    // ordering; per-condition spreads chosen so the variance pretest
    // rejects for PS/LK/AM and not for AP/PI.
    //                         A     B     C     D
    const double mean[5][4] = {{3.8, 4.3, 3.3, 2.8},    // PS: B>A>C>D
                               {4.0, 3.7, 2.9, 3.2},    // AP: A>B>D>C (A lifted by level-2 bump)
                               {4.1, 3.7, 3.3, 2.9},    // AM: A>B>C>D
                               {4.4, 3.4, 3.8, 2.9},    // LK: A>C>B>D
                               {3.6, 3.6, 3.6, 3.6}};   // PI: flat
    const double sd[5][4] = {{0.40, 0.80, 0.25, 0.60},  // PS: unequal
                             {0.50, 0.50, 0.50, 0.50},  // AP: equal
                             {0.30, 0.55, 0.80, 0.45},  // AM: unequal
                             {0.25, 0.70, 0.35, 0.80},  // LK: unequal
                             {0.50, 0.50, 0.50, 0.50}};  // PI: equal

    GaussianSampler rng(mix_seed(seed, 0x5C0E5ULL));
    ScoreTable table;
    const int n_participants = 30;
    for (int p = 0; p < n_participants; ++p) {
        char pid[8];
        std::snprintf(pid, sizeof(pid), "P%02d", p + 1);
        const int level = p % 4;  // experience 0..3, balanced
        for (PerceivedFeature f : kAllFeatures) {
            const int fi = static_cast<int>(f);
            for (Condition c : kAllConditions) {
                const int ci = condition_index(c);
                double score = mean[fi][ci] + sd[fi][ci] * rng.next();
                // Experience effects: novices (level 2) see condition A as
                // more anthropomorphic; level-3 raters like A, C and D more.
                if (f == PerceivedFeature::AP && c == Condition::A && level == 2) score += 0.7;
                if (f == PerceivedFeature::LK && level == 3 &&
                    (c == Condition::A || c == Condition::C || c == Condition::D))
                    score += 0.6;
                table.rows.push_back(ScoreRow{pid, c, ExperienceLevel(level), f, score});
            }
        }
    }
    return table;
}

}  // namespace bvpkit::stats
