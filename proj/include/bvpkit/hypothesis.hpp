#pragma once

namespace bvpkit {

enum class Decision { RejectNull, FailToRejectNull };

/// Outcome of any hypothesis test. `p_is_bound` marks p-values that are
/// caps from a critical-value lookup table rather than exact
/// probabilities (e.g. "p = 0.1" really means "p >= 0.1").
struct HypothesisTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Decision decision = Decision::FailToRejectNull;
    double alpha = 0.05;
    bool p_is_bound = false;
};

/// Builds a result with the decision derived from p < alpha, keeping the
/// decision/p-value invariant impossible to violate by hand.
inline HypothesisTestResult make_test_result(double statistic, double p_value, double alpha,
                                             bool p_is_bound = false) {
    HypothesisTestResult r;
    r.statistic = statistic;
    r.p_value = p_value;
    r.alpha = alpha;
    r.p_is_bound = p_is_bound;
    r.decision = p_value < alpha ? Decision::RejectNull : Decision::FailToRejectNull;
    return r;
}

}  // namespace bvpkit
