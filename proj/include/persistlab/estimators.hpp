#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "persistlab/history.hpp"
#include "persistlab/population.hpp"

namespace persistlab {

constexpr double kWeakFirstStageTol = 1e-10;

// Thrown when z is constant in the sample.
struct DegenerateInstrumentError : std::runtime_error {
    DegenerateInstrumentError()
        : std::runtime_error("degenerate instrument: z takes a single value") {}
};

// Thrown when the first-stage contrast is (numerically) zero.
struct WeakFirstStageError : std::runtime_error {
    WeakFirstStageError()
        : std::runtime_error("weak or void first stage") {}
};

namespace detail {

template <class V>
double mean_where(const V& v, const std::vector<int>& z, int value) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (z[i] == value) {
            sum += static_cast<double>(v[i]);
            ++count;
        }
    }
    if (count == 0) throw DegenerateInstrumentError{};
    return sum / static_cast<double>(count);
}

template <class V>
double contrast(const std::vector<int>& z, const V& v) {
    if (z.size() != v.size())
        throw std::invalid_argument("estimator: size mismatch");
    if (z.empty()) throw std::invalid_argument("estimator: empty sample");
    return mean_where(v, z, 1) - mean_where(v, z, 0);
}

}  // namespace detail

// E(d|z=1) - E(d|z=0).
template <class D>
double first_stage(const std::vector<int>& z, const D& d) {
    return detail::contrast(z, d);
}

// E(y|z=1) - E(y|z=0).
template <class Y>
double reduced_form(const std::vector<int>& z, const Y& y) {
    return detail::contrast(z, y);
}

// Wald estimator: reduced form over first stage.
template <class D, class Y>
double wald(const std::vector<int>& z, const D& d, const Y& y,
            double tol = kWeakFirstStageTol) {
    const double fs = first_stage(z, d);
    if (std::abs(fs) < tol) throw WeakFirstStageError{};
    return reduced_form(z, y) / fs;
}

// Sample OLS slope of y on d; for binary d this equals the
// conditional-mean difference.
template <class D, class Y>
double ols_slope(const D& d, const Y& y) {
    if (d.size() != y.size())
        throw std::invalid_argument("ols_slope: size mismatch");
    if (d.empty()) throw std::invalid_argument("ols_slope: empty sample");
    const double n = static_cast<double>(d.size());
    double dbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        dbar += static_cast<double>(d[i]);
        ybar += static_cast<double>(y[i]);
    }
    dbar /= n;
    ybar /= n;
    double sdy = 0.0, sdd = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double dd = static_cast<double>(d[i]) - dbar;
        sdy += dd * (static_cast<double>(y[i]) - ybar);
        sdd += dd * dd;
    }
    if (sdd == 0.0)
        throw std::invalid_argument("ols_slope: constant regressor");
    return sdy / sdd;
}

// Wald on the subsample with z in {low, high}, the higher value as z=1.
template <class D, class Y>
double pairwise_wald(const std::vector<int>& z, const D& d, const Y& y,
                     int low, int high, double tol = kWeakFirstStageTol) {
    if (low >= high)
        throw std::invalid_argument("pairwise_wald: need low < high");
    std::vector<int> zs;
    std::vector<double> ds, ys;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == low || z[i] == high) {
            zs.push_back(z[i] == high ? 1 : 0);
            ds.push_back(static_cast<double>(d[i]));
            ys.push_back(static_cast<double>(y[i]));
        }
    }
    if (zs.empty()) throw DegenerateInstrumentError{};
    return wald(zs, ds, ys, tol);
}

enum class LateTarget { beta, rho_contrast };

// Mean effect over complier-labeled locations.
inline double late_classified(const std::vector<ComplianceLabel>& labels,
                              const Population& pop,
                              LateTarget target = LateTarget::beta) {
    if (labels.size() != pop.size())
        throw std::invalid_argument("late_classified: size mismatch");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == ComplianceLabel::complier) {
            sum += target == LateTarget::beta ? pop.return_beta[i] : pop.rho[i];
            ++count;
        }
    }
    if (count == 0)
        throw std::runtime_error("late_classified: empty complier set");
    return sum / static_cast<double>(count);
}

// Population mean of the treatment effect.
inline double ate(const Population& pop, LateTarget target = LateTarget::beta) {
    if (pop.size() == 0) throw std::invalid_argument("ate: empty population");
    double sum = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i)
        sum += target == LateTarget::beta ? pop.return_beta[i] : pop.rho[i];
    return sum / static_cast<double>(pop.size());
}

// Monte Carlo dispersion of one estimand across reps.
struct EstimandSummary {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double sd = std::numeric_limits<double>::quiet_NaN();
    double ci_lo = std::numeric_limits<double>::quiet_NaN();
    double ci_hi = std::numeric_limits<double>::quiet_NaN();
};

inline EstimandSummary summarize(const std::vector<double>& values) {
    EstimandSummary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double se = s.sd / std::sqrt(n);
    s.ci_lo = s.mean - 1.959963984540054 * se;
    s.ci_hi = s.mean + 1.959963984540054 * se;
    return s;
}

// Estimator outputs across Monte Carlo replications. The scalar fields are
// the first valid rep, so the Wald identity holds on them exactly.
struct EstimateReport {
    double wald = std::numeric_limits<double>::quiet_NaN();
    double first_stage = std::numeric_limits<double>::quiet_NaN();
    double reduced_form = std::numeric_limits<double>::quiet_NaN();
    double ols_slope = std::numeric_limits<double>::quiet_NaN();
    double late_classified = std::numeric_limits<double>::quiet_NaN();
    double ate = std::numeric_limits<double>::quiet_NaN();

    // Headline estimand (wald, or ols_slope when there is no instrument).
    EstimandSummary mc;
    std::string headline;

    std::map<std::string, EstimandSummary> estimands;
    std::map<std::string, std::vector<double>> rep_values;
    std::vector<ComplianceCounts> rep_counts;

    int n_reps = 0;
    int excluded_reps = 0;  // reps with a void first stage, counted not dropped
};

}  // namespace persistlab
