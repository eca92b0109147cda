#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "bvpkit/hypothesis.hpp"
#include "bvpkit/time_series.hpp"

namespace bvpkit::stationarity {

enum class AdfRegression { ConstantOnly, ConstantAndTrend };
enum class KpssRegression { Level, Trend };

struct AdfResult {
    HypothesisTestResult test;
    int used_lag = 0;
    std::size_t nobs = 0;  ///< observations in the final regression
    double cv_1pct = 0.0, cv_5pct = 0.0, cv_10pct = 0.0;
};

struct KpssResult {
    HypothesisTestResult test;
    int lags = 0;
    KpssRegression regression = KpssRegression::Level;
};

/// Augmented Dickey-Fuller unit-root test.
///
/// Fits dy_t = a [+ b t] + g y_{t-1} + sum d_i dy_{t-i} + e by OLS. The
/// lag order is chosen by AIC over 0..max_lag on a common sample
/// (default max_lag = floor(12 (n/100)^{1/4})), then the regression is
/// refit at the chosen order on all usable observations. The statistic
/// is the t-value of g; the p-value interpolates the MacKinnon (2010)
/// critical-value surface and is reported as a bound when the statistic
/// leaves the tabulated 1%..10% range.
///
/// Null hypothesis: the series has a unit root.
AdfResult adf_test_full(std::span<const double> y,
                        AdfRegression regression = AdfRegression::ConstantOnly,
                        std::optional<int> max_lag = std::nullopt, double alpha = 0.05);

HypothesisTestResult adf_test(const TimeSeries& series,
                              AdfRegression regression = AdfRegression::ConstantOnly,
                              std::optional<int> max_lag = std::nullopt, double alpha = 0.05);

/// KPSS stationarity test (null: series is level/trend stationary).
///
/// Statistic = n^-2 sum_t S_t^2 / s^2(l) with the Newey-West Bartlett
/// long-run variance, default l = floor(4 (n/100)^{1/4}). The p-value
/// interpolates the published critical-value table (caps at 0.01/0.10
/// flagged via p_is_bound).
KpssResult kpss_test_full(std::span<const double> y,
                          KpssRegression regression = KpssRegression::Level,
                          std::optional<int> lags = std::nullopt, double alpha = 0.05);

HypothesisTestResult kpss_test(const TimeSeries& series,
                               KpssRegression regression = KpssRegression::Level,
                               std::optional<int> lags = std::nullopt, double alpha = 0.05);

enum class StationarityClass { Stationary, UnitRoot, TrendStationary, DifferenceStationary };

std::string to_string(StationarityClass c);

struct StationarityReport {
    HypothesisTestResult adf;
    HypothesisTestResult kpss;  ///< level regression
    std::optional<HypothesisTestResult> kpss_trend;
    StationarityClass classification = StationarityClass::UnitRoot;
};

/// Four-case decision table over the two tests (run at the same alpha):
///   ADF rejects,  KPSS fails   -> Stationary
///   ADF fails,    KPSS rejects -> TrendStationary when the trend-KPSS
///                                 fails to reject, otherwise UnitRoot
///   ADF rejects,  KPSS rejects -> DifferenceStationary
///   ADF fails,    KPSS fails   -> UnitRoot (insufficient evidence)
StationarityReport classify_stationarity(
    const HypothesisTestResult& adf, const HypothesisTestResult& kpss_level,
    std::optional<HypothesisTestResult> kpss_trend = std::nullopt);

/// Runs ADF (constant), KPSS (level) and, when the decision needs it,
/// KPSS (trend), then classifies.
StationarityReport analyze_stationarity(std::span<const double> y, double alpha = 0.05);

}  // namespace bvpkit::stationarity
