#pragma once
// Statistics utilities shared by the verification suites: conjugation-invariant
// class coordinates, Kolmogorov-Smirnov distances with asymptotic p-values,
// reference CDFs, and small report/CSV helpers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "looplab/liegroup.hpp"

namespace looplab {

// One named statistical check.  `threshold` is the bound `pass` was decided
// against: an upper bound on `statistic` for fixed-tolerance checks, or a
// lower bound on `p_value` for significance checks.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;  // 0 for one-sample tests
    double p_value = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
};

// Conjugation-invariant coordinates used to compare distributions on G.
// Torus: the angle vector itself (conjugation is trivial).  SU2/SO3: the
// geodesic distance to the identity, constant on conjugacy classes.
inline std::vector<double> class_coordinate(const GroupKind& kind, const GroupElem& g) {
    if (kind.tag == GroupTag::Torus) return g.angles;
    return {group_distance(kind, g, identity(kind))};
}

// Kolmogorov survival function Q(t) = P(sup|B_bridge| > t)
//   = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 t^2),
// evaluated through the Jacobi-theta transform for small t where the
// alternating series converges slowly.
inline double kolmogorov_q(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("kolmogorov_q: t must be >= 0");
    if (t < 1e-8) return 1.0;
    if (t < 1.18) {
        const double y = std::exp(-kLgPi * kLgPi / (8.0 * t * t));
        const double cdf = std::sqrt(2.0 * kLgPi) / t *
                           (y + std::pow(y, 9.0) + std::pow(y, 25.0) + std::pow(y, 49.0));
        return 1.0 - cdf;
    }
    const double e = std::exp(-2.0 * t * t);
    double q = 0.0;
    double term = 2.0;
    for (int j = 1; j <= 32; ++j) {
        term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) * std::pow(e, static_cast<double>(j) * j);
        q += term;
        if (std::abs(term) < 1e-17) break;
    }
    return std::max(q, 0.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

namespace detail {

// Stephens' finite-n correction for the asymptotic p-value.
inline double ks_p_value(double d, double effective_n) {
    const double s = std::sqrt(effective_n);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace detail

// One-sample KS distance against a reference CDF.
inline KsResult ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::max(std::abs(f - i / n), std::abs(f - (i + 1) / n)));
    }
    return {d, detail::ks_p_value(d, n), xs.size(), 0};
}

// Two-sample KS distance.  Ties are handled by advancing both empirical CDFs
// past the tied value before comparing, so identical samples give exactly 0.
inline KsResult ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(i / n - j / m));
    }
    const double ne = n * m / (n + m);
    return {d, detail::ks_p_value(d, ne), a.size(), b.size()};
}

// CDF on (-pi, pi] of a Cauchy(scale gamma) wrapped to the circle.
inline double wrapped_cauchy_cdf(double gamma, double theta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("wrapped_cauchy_cdf: gamma must be > 0");
    if (theta <= -kLgPi) return 0.0;
    if (theta >= kLgPi) return 1.0;
    return 0.5 + std::atan(std::tan(0.5 * theta) / std::tanh(0.5 * gamma)) / kLgPi;
}

// Report constructors keeping the pass flag in sync with the stored bound.
inline TestReport report_stat_below(std::string name, double stat, double bound,
                                    std::size_t n1 = 0, std::size_t n2 = 0) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = stat;
    r.threshold = bound;
    r.n1 = n1;
    r.n2 = n2;
    r.pass = stat < bound;
    return r;
}

inline TestReport report_p_above(std::string name, const KsResult& ks, double alpha) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = ks.statistic;
    r.threshold = alpha;
    r.n1 = ks.n1;
    r.n2 = ks.n2;
    r.p_value = ks.p_value;
    r.pass = ks.p_value >= alpha;
    return r;
}

// All p-values clear alpha / m (Bonferroni across the suite).
inline bool bonferroni_pass(const std::vector<TestReport>& reports, double alpha = 0.01) {
    if (reports.empty()) throw std::invalid_argument("bonferroni_pass: no reports");
    const double cut = alpha / static_cast<double>(reports.size());
    for (const TestReport& r : reports)
        if (!(r.p_value >= cut)) return false;
    return true;
}

// --- CSV helpers ----------------------------------------------------------

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    const auto emit = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    emit(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width differs from header");
        emit(row);
    }
}

}  // namespace looplab
