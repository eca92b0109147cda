#include "bvpkit/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bvpkit/errors.hpp"

namespace bvpkit::stationarity {

namespace {

/// Dense column-major least squares via Householder QR.
/// Solves min ||X b - y||; also exposes SSR and coefficient standard
/// errors. Throws DegenerateInputError on rank deficiency.
class LeastSquares {
public:
    LeastSquares(std::vector<double> x, std::size_t rows, std::size_t cols, std::vector<double> y)
        : a_(std::move(x)), m_(rows), q_(cols), rhs_(std::move(y)) {
        factorize();
    }

    const std::vector<double>& beta() const { return beta_; }
    double ssr() const { return ssr_; }

    double stderr_of(std::size_t j) const {
        // diag_j of (X'X)^-1 = || R^-T e_j ||^2 via forward substitution
        std::vector<double> z(q_, 0.0);
        for (std::size_t i = 0; i < q_; ++i) {
            double acc = (i == j) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) acc -= r_at(k, i) * z[k];
            z[i] = acc / r_at(i, i);
        }
        double diag = 0.0;
        for (double v : z) diag += v * v;
        const double sigma2 = ssr_ / static_cast<double>(m_ - q_);
        return std::sqrt(sigma2 * diag);
    }

private:
    double& at(std::size_t i, std::size_t j) { return a_[j * m_ + i]; }
    double r_at(std::size_t i, std::size_t j) const { return a_[j * m_ + i]; }

    void factorize() {
        if (m_ <= q_) throw DegenerateInputError("least squares: too few observations");
        std::vector<double> house(m_);
        double max_diag = 0.0;

        for (std::size_t col = 0; col < q_; ++col) {
            double norm = 0.0;
            for (std::size_t i = col; i < m_; ++i) norm += at(i, col) * at(i, col);
            norm = std::sqrt(norm);
            if (norm == 0.0)
                throw DegenerateInputError("least squares: singular regression matrix");
            const double alpha = at(col, col) >= 0.0 ? -norm : norm;

            double vnorm2 = 0.0;
            house[col] = at(col, col) - alpha;
            vnorm2 += house[col] * house[col];
            for (std::size_t i = col + 1; i < m_; ++i) {
                house[i] = at(i, col);
                vnorm2 += house[i] * house[i];
            }
            if (vnorm2 == 0.0)
                throw DegenerateInputError("least squares: singular regression matrix");

            // apply reflector to remaining columns and rhs
            for (std::size_t j = col; j < q_; ++j) {
                double dot = 0.0;
                for (std::size_t i = col; i < m_; ++i) dot += house[i] * at(i, j);
                const double scale = 2.0 * dot / vnorm2;
                for (std::size_t i = col; i < m_; ++i) at(i, j) -= scale * house[i];
            }
            double dot = 0.0;
            for (std::size_t i = col; i < m_; ++i) dot += house[i] * rhs_[i];
            const double scale = 2.0 * dot / vnorm2;
            for (std::size_t i = col; i < m_; ++i) rhs_[i] -= scale * house[i];

            max_diag = std::max(max_diag, std::fabs(r_at(col, col)));
        }

        for (std::size_t col = 0; col < q_; ++col)
            if (std::fabs(r_at(col, col)) < 1e-12 * std::max(1.0, max_diag))
                throw DegenerateInputError("least squares: singular regression matrix");

        beta_.assign(q_, 0.0);
        for (std::size_t i = q_; i-- > 0;) {
            double acc = rhs_[i];
            for (std::size_t j = i + 1; j < q_; ++j) acc -= r_at(i, j) * beta_[j];
            beta_[i] = acc / r_at(i, i);
        }

        ssr_ = 0.0;
        for (std::size_t i = q_; i < m_; ++i) ssr_ += rhs_[i] * rhs_[i];
    }

    std::vector<double> a_;  // column-major; overwritten with R and reflectors
    std::size_t m_, q_;
    std::vector<double> rhs_;
    std::vector<double> beta_;
    double ssr_ = 0.0;
};

// MacKinnon (2010), "Critical Values for Cointegration Tests",
// Queen's University QED working paper 1227, response-surface
// coefficients for the univariate Dickey-Fuller t distribution:
// cv(T) = b0 + b1/T + b2/T^2 + b3/T^3, rows for 1%/5%/10%.
constexpr double kMackinnonConstant[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};
constexpr double kMackinnonTrend[3][4] = {
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
};

// Kwiatkowski, Phillips, Schmidt & Shin (1992), Table 1: upper-tail
// critical values of the level/trend statistic at 10/5/2.5/1%.
constexpr double kKpssLevelCrit[4] = {0.347, 0.463, 0.574, 0.739};
constexpr double kKpssTrendCrit[4] = {0.119, 0.146, 0.176, 0.216};
constexpr double kKpssPvals[4] = {0.10, 0.05, 0.025, 0.01};

double mackinnon_cv(const double (&row)[4], double t) {
    return row[0] + row[1] / t + row[2] / (t * t) + row[3] / (t * t * t);
}

/// Linear interpolation of p against three critical values; caps at the
/// table's outer levels (and reports the cap through `bound`).
double adf_p_value(double stat, double cv1, double cv5, double cv10, bool& bound) {
    bound = false;
    if (stat <= cv1) {
        bound = stat < cv1;
        return 0.01;
    }
    if (stat >= cv10) {
        bound = stat > cv10;
        return 0.10;
    }
    if (stat <= cv5) return 0.01 + (stat - cv1) / (cv5 - cv1) * (0.05 - 0.01);
    return 0.05 + (stat - cv5) / (cv10 - cv5) * (0.10 - 0.05);
}

double kpss_p_value(double stat, const double (&crit)[4], bool& bound) {
    bound = false;
    // crit ascends while p descends; clamp outside the table
    if (stat <= crit[0]) {
        bound = stat < crit[0];
        return kKpssPvals[0];
    }
    if (stat >= crit[3]) {
        bound = stat > crit[3];
        return kKpssPvals[3];
    }
    for (int i = 0; i < 3; ++i) {
        if (stat <= crit[i + 1]) {
            const double f = (stat - crit[i]) / (crit[i + 1] - crit[i]);
            return kKpssPvals[i] + f * (kKpssPvals[i + 1] - kKpssPvals[i]);
        }
    }
    return kKpssPvals[3];
}

struct AdfFit {
    double t_gamma = 0.0;
    double aic = 0.0;
};

/// One Dickey-Fuller regression: dy[rows] on deterministics, y_{t-1} and
/// `k` lagged differences, over observations start..n_dy-1 of dy.
AdfFit fit_adf(std::span<const double> y, std::span<const double> dy, std::size_t start, int k,
               AdfRegression regression) {
    const std::size_t m = dy.size() - start;
    const std::size_t ndet = regression == AdfRegression::ConstantAndTrend ? 2 : 1;
    const std::size_t q = ndet + 1 + static_cast<std::size_t>(k);

    std::vector<double> x(m * q);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t t = start + i;  // index into dy; dy[t] = y[t+1]-y[t]
        rhs[i] = dy[t];
        std::size_t col = 0;
        x[col++ * m + i] = 1.0;
        if (ndet == 2) x[col++ * m + i] = static_cast<double>(i + 1);
        x[col++ * m + i] = y[t];  // level y_{t-1} relative to dy[t]
        for (int lag = 1; lag <= k; ++lag) x[col++ * m + i] = dy[t - static_cast<std::size_t>(lag)];
    }

    LeastSquares ls(std::move(x), m, q, std::move(rhs));
    const std::size_t gamma_col = ndet;  // deterministics first, then the level

    AdfFit fit;
    fit.t_gamma = ls.beta()[gamma_col] / ls.stderr_of(gamma_col);
    const double n = static_cast<double>(m);
    // Gaussian AIC up to a shared additive constant; candidates share n
    fit.aic = n * std::log(ls.ssr() / n) + 2.0 * static_cast<double>(q);
    return fit;
}

}  // namespace

AdfResult adf_test_full(std::span<const double> y, AdfRegression regression,
                        std::optional<int> max_lag, double alpha) {
    const std::size_t n = y.size();
    if (n < 20) throw DataError("adf_test: need at least 20 observations, got " +
                                std::to_string(n));
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*lo == *hi) throw DegenerateInputError("adf_test: constant series");

    const int ntrend = regression == AdfRegression::ConstantAndTrend ? 2 : 1;
    int kmax = max_lag.value_or(
        static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    kmax = std::min<int>(kmax, static_cast<int>(n) / 2 - ntrend - 1);
    if (kmax < 0)
        throw DataError("adf_test: series too short for the requested regression");

    std::vector<double> dy(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = y[i + 1] - y[i];

    // Lag order by AIC on the common maxlag-trimmed sample, then refit
    // at the chosen order using every usable observation.
    int best_k = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kmax; ++k) {
        const AdfFit fit = fit_adf(y, dy, static_cast<std::size_t>(kmax), k, regression);
        if (fit.aic < best_aic) {
            best_aic = fit.aic;
            best_k = k;
        }
    }
    const AdfFit final_fit =
        fit_adf(y, dy, static_cast<std::size_t>(best_k), best_k, regression);

    AdfResult out;
    out.used_lag = best_k;
    out.nobs = dy.size() - static_cast<std::size_t>(best_k);

    const auto& table = regression == AdfRegression::ConstantAndTrend ? kMackinnonTrend
                                                                      : kMackinnonConstant;
    const double t = static_cast<double>(out.nobs);
    out.cv_1pct = mackinnon_cv(table[0], t);
    out.cv_5pct = mackinnon_cv(table[1], t);
    out.cv_10pct = mackinnon_cv(table[2], t);

    bool bound = false;
    const double p = adf_p_value(final_fit.t_gamma, out.cv_1pct, out.cv_5pct, out.cv_10pct, bound);
    out.test = make_test_result(final_fit.t_gamma, p, alpha, bound);
    return out;
}

HypothesisTestResult adf_test(const TimeSeries& series, AdfRegression regression,
                              std::optional<int> max_lag, double alpha) {
    return adf_test_full(series.samples(), regression, max_lag, alpha).test;
}

KpssResult kpss_test_full(std::span<const double> y, KpssRegression regression,
                          std::optional<int> lags, double alpha) {
    const std::size_t n = y.size();
    if (n < 20) throw DataError("kpss_test: need at least 20 observations, got " +
                                std::to_string(n));
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*lo == *hi) throw DegenerateInputError("kpss_test: constant series");

    std::vector<double> resid(n);
    if (regression == KpssRegression::Level) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - mean;
    } else {
        // residuals from y on [1, t]
        std::vector<double> x(n * 2);
        std::vector<double> rhs(y.begin(), y.end());
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 1.0;
            x[n + i] = static_cast<double>(i + 1);
        }
        LeastSquares ls(std::move(x), n, 2, std::move(rhs));
        for (std::size_t i = 0; i < n; ++i)
            resid[i] = y[i] - ls.beta()[0] - ls.beta()[1] * static_cast<double>(i + 1);
    }

    int l = lags.value_or(
        static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    l = std::min<int>(l, static_cast<int>(n) - 1);

    double cumsum = 0.0, eta = 0.0, s0 = 0.0;
    for (double e : resid) {
        cumsum += e;
        eta += cumsum * cumsum;
        s0 += e * e;
    }
    eta /= static_cast<double>(n) * static_cast<double>(n);

    // Newey-West long-run variance with the Bartlett kernel
    double lrv = s0;
    for (int s = 1; s <= l; ++s) {
        const double w = 1.0 - static_cast<double>(s) / (static_cast<double>(l) + 1.0);
        double acc = 0.0;
        for (std::size_t t = static_cast<std::size_t>(s); t < n; ++t)
            acc += resid[t] * resid[t - static_cast<std::size_t>(s)];
        lrv += 2.0 * w * acc;
    }
    lrv /= static_cast<double>(n);
    if (lrv <= 0.0) throw DegenerateInputError("kpss_test: nonpositive long-run variance");

    const double stat = eta / lrv;
    bool bound = false;
    const double p = regression == KpssRegression::Level
                         ? kpss_p_value(stat, kKpssLevelCrit, bound)
                         : kpss_p_value(stat, kKpssTrendCrit, bound);

    KpssResult out;
    out.lags = l;
    out.regression = regression;
    out.test = make_test_result(stat, p, alpha, bound);
    return out;
}

HypothesisTestResult kpss_test(const TimeSeries& series, KpssRegression regression,
                               std::optional<int> lags, double alpha) {
    return kpss_test_full(series.samples(), regression, lags, alpha).test;
}

std::string to_string(StationarityClass c) {
    switch (c) {
        case StationarityClass::Stationary: return "Stationary";
        case StationarityClass::UnitRoot: return "UnitRoot";
        case StationarityClass::TrendStationary: return "TrendStationary";
        case StationarityClass::DifferenceStationary: return "DifferenceStationary";
    }
    return "?";
}

StationarityReport classify_stationarity(const HypothesisTestResult& adf,
                                         const HypothesisTestResult& kpss_level,
                                         std::optional<HypothesisTestResult> kpss_trend) {
    if (adf.alpha != kpss_level.alpha ||
        (kpss_trend && kpss_trend->alpha != adf.alpha))
        throw DataError("classify_stationarity: tests were run at different alpha levels");

    StationarityReport report;
    report.adf = adf;
    report.kpss = kpss_level;
    report.kpss_trend = kpss_trend;

    const bool adf_rejects = adf.decision == Decision::RejectNull;
    const bool kpss_rejects = kpss_level.decision == Decision::RejectNull;

    if (adf_rejects && !kpss_rejects) {
        report.classification = StationarityClass::Stationary;
    } else if (adf_rejects && kpss_rejects) {
        report.classification = StationarityClass::DifferenceStationary;
    } else if (!adf_rejects && kpss_rejects) {
        // distinguishable only with the trend-regression KPSS
        report.classification =
            (kpss_trend && kpss_trend->decision == Decision::FailToRejectNull)
                ? StationarityClass::TrendStationary
                : StationarityClass::UnitRoot;
    } else {
        report.classification = StationarityClass::UnitRoot;
    }
    return report;
}

StationarityReport analyze_stationarity(std::span<const double> y, double alpha) {
    const auto adf = adf_test_full(y, AdfRegression::ConstantOnly, std::nullopt, alpha);
    const auto kpss_level = kpss_test_full(y, KpssRegression::Level, std::nullopt, alpha);

    std::optional<HypothesisTestResult> kpss_trend;
    if (adf.test.decision == Decision::FailToRejectNull &&
        kpss_level.test.decision == Decision::RejectNull)
        kpss_trend = kpss_test_full(y, KpssRegression::Trend, std::nullopt, alpha).test;

    return classify_stationarity(adf.test, kpss_level.test, kpss_trend);
}

}  // namespace bvpkit::stationarity
