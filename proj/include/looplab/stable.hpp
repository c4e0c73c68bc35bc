#pragma once

// Heavy-tailed laws on the Lie algebra: the isotropic 1-stable family nu^sigma
// with Cauchy-type profile, the radial transport psi/phi identifying the
// scalar Cauchy tail with the d-dimensional radial tail, 1-stable
// piecewise-linear paths, and their developed limit law on the group.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "looplab/liegroup.hpp"
#include "looplab/rng.hpp"

namespace looplab {

struct StableParams {
    int d = 1;
    double sigma = 1.0;
};

// Scale making the developed limit law match the unit-rate puncture cloud:
// Gamma(d/2) / (2 sqrt(pi) Gamma((d+1)/2)).
inline double sigma_for_group(int d) {
    if (d < 1) throw std::invalid_argument("sigma_for_group: d must be >= 1");
    return std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5 * (d + 1))) / (2.0 * std::sqrt(kLgPi));
}

// Scale used inside the radial transport: twice the group constant.
inline double transport_sigma(int d) { return 2.0 * sigma_for_group(d); }

// Density of nu^sigma at Z:  (1/C1) sigma^-d (1 + |Z|^2/sigma^2)^-(d+1)/2,
// C1 = pi^((d+1)/2) / Gamma((d+1)/2).
inline double nu_sigma_density(const StableParams& p, const AlgebraVec& z) {
    if (p.d < 1 || !(p.sigma > 0.0)) throw std::invalid_argument("nu_sigma_density: bad params");
    const double c1 = std::pow(kLgPi, 0.5 * (p.d + 1)) / std::tgamma(0.5 * (p.d + 1));
    const double nrm = algebra_norm(z);
    const double r2 = nrm * nrm;
    return 1.0 / (c1 * std::pow(p.sigma, p.d) *
                  std::pow(1.0 + r2 / (p.sigma * p.sigma), 0.5 * (p.d + 1)));
}

// Gaussian-ratio sampler: Z = sigma * G / |W|, G a d-dimensional standard
// Gaussian, W an independent scalar Gaussian (isotropic Student-t with one
// degree of freedom, which is exactly nu^sigma).
inline AlgebraVec nu_sigma_sample(const StableParams& p, Philox& rng) {
    if (p.d < 1 || !(p.sigma > 0.0)) throw std::invalid_argument("nu_sigma_sample: bad params");
    AlgebraVec z(p.d);
    for (;;) {
        const double w = std::abs(normal01(rng));
        if (w < 1e-300) continue;  // underflow guard
        for (int i = 0; i < p.d; ++i) z[i] = p.sigma * normal01(rng) / w;
        return z;
    }
}

namespace detail {

// 64-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence.
inline const std::vector<std::pair<double, double>>& gauss_legendre64() {
    static const std::vector<std::pair<double, double>> table = [] {
        constexpr int n = 64;
        std::vector<std::pair<double, double>> t;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(kLgPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            t.push_back({x, w});
            if (x > 1e-14) t.push_back({-x, w});
        }
        return t;
    }();
    return table;
}

}  // namespace detail

namespace detail {

// c_d * int_a^b sin^(d-1) phi dphi with c_d = 2 Gamma((d+1)/2) / (sqrt(pi) Gamma(d/2)).
// Gauss-Legendre keeps full relative accuracy even on tiny intervals, which is
// what the transport solver needs in both distribution tails.
inline double sin_power_integral(int d, double a, double b) {
    const double c_d =
        2.0 * std::exp(std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d)) / std::sqrt(kLgPi);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double s = 0.0;
    for (const auto& [node, weight] : gauss_legendre64()) {
        const double phi = mid + half * node;
        s += weight * std::pow(std::sin(phi), d - 1);
    }
    return c_d * half * s;
}

}  // namespace detail

// P(|Z| > x) for Z ~ nu^1 in dimension d, by quadrature over [arctan x, pi/2].
inline double radial_tail(int d, double x) {
    if (d < 1) throw std::invalid_argument("radial_tail: d must be >= 1");
    if (!(x >= 0.0)) throw std::invalid_argument("radial_tail: x must be >= 0");
    return detail::sin_power_integral(d, std::atan(x), 0.5 * kLgPi);
}

// P(|Z| <= r) for nu^1 in dimension d, by quadrature over [0, arctan r] (its
// own integral rather than 1 - tail, so small values keep relative accuracy).
inline double radial_cdf(int d, double r) {
    if (d < 1) throw std::invalid_argument("radial_cdf: d must be >= 1");
    if (!(r >= 0.0)) throw std::invalid_argument("radial_cdf: r must be >= 0");
    return detail::sin_power_integral(d, 0.0, std::atan(r));
}

// psi(x): the unique nonnegative solution of
//   (2/pi) * (pi/2 - arctan psi) = P(|Z| > x / transport_sigma(d)),
// by bracketed bisection on the arctan side.  Below the median the equation is
// solved in its complement form (2/pi) arctan psi = P(|Z| <= x/sigma_t) so
// that both sides stay relatively accurate: for small x, psi shrinks like x^d
// and the tail form would round to 1.
inline double psi_transport(int d, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("psi_transport: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double u = x / transport_sigma(d);
    const double cdf = radial_cdf(d, u);
    const bool lower = cdf <= 0.5;
    const double target = lower ? cdf : radial_tail(d, u);
    if (target <= 0.0) return lower ? 0.0 : x;
    // analytic side, sign-folded so the bracket logic sees an increasing map
    const double sgn = lower ? 1.0 : -1.0;
    const auto lhs = [&](double v) {
        return sgn * (2.0 / kLgPi) * (lower ? std::atan(v) : std::atan(1.0 / v));
    };
    const double tgt = sgn * target;
    // seed from the closed-form inverse of the arctan side, then bracket it
    const double seed =
        lower ? std::tan(0.5 * kLgPi * target) : 1.0 / std::tan(0.5 * kLgPi * target);
    double lo = 0.5 * seed, hi = 2.0 * seed;
    while (lhs(lo) > tgt) lo *= 0.5;
    while (lhs(hi) < tgt) hi *= 2.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * lo; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (lhs(mid) < tgt ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// phi = psi^-1: bracketed bisection on the quadrature side, again split at the
// median so each branch compares small quantities against small quantities.
inline double phi_transport(int d, double y) {
    if (!(y >= 0.0)) throw std::invalid_argument("phi_transport: y must be >= 0");
    if (y == 0.0) return 0.0;
    const double sig = transport_sigma(d);
    const bool lower = y <= 1.0;
    const double target = (2.0 / kLgPi) * (lower ? std::atan(y) : std::atan(1.0 / y));
    const auto rhs = [&](double v) {
        return lower ? radial_cdf(d, v / sig) : radial_tail(d, v / sig);
    };
    double lo = 0.0, hi = sig * std::max(1.0, 2.0 * y);
    while (lower ? rhs(hi) < target : rhs(hi) > target) hi *= 2.0;
    for (int iter = 0; iter < 400 && (lo == 0.0 || hi - lo > 1e-12 * lo); ++iter) {
        const double mid = 0.5 * (lo + hi);
        ((lower ? rhs(mid) < target : rhs(mid) > target) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Tabulated transport: psi on a log-spaced grid with monotone cubic
// interpolation in log-log coordinates; phi inverts the interpolant itself,
// so the roundtrip is solver-exact.  Outside the grid, power-law
// extrapolation at the small end (slope -> d) and unit-slope offset at the
// large end (psi(x) - x is bounded).
class RadialTransport {
  public:
    explicit RadialTransport(int d, double x_lo = 1e-8, double x_hi = 1e6, int per_decade = 60)
        : d_(d) {
        if (d < 1) throw std::invalid_argument("RadialTransport: d must be >= 1");
        const double llo = std::log(x_lo), lhi = std::log(x_hi);
        const int n = static_cast<int>(per_decade * std::log10(x_hi / x_lo)) + 1;
        lx_.resize(n);
        lp_.resize(n);
        for (int i = 0; i < n; ++i) {
            lx_[i] = llo + (lhi - llo) * i / (n - 1);
            lp_[i] = std::log(psi_transport(d, std::exp(lx_[i])));
        }
        build_slopes();
        offset_ = std::exp(lp_.back()) - std::exp(lx_.back());
    }

    int dim() const { return d_; }

    double psi(double x) const {
        if (!(x >= 0.0)) throw std::invalid_argument("RadialTransport::psi: x must be >= 0");
        if (x == 0.0) return 0.0;
        const double lx = std::log(x);
        if (lx <= lx_.front()) return std::exp(lp_.front() + slope_.front() * (lx - lx_.front()));
        if (lx >= lx_.back()) return x + offset_;
        return std::exp(eval_log(lx));
    }

    double phi(double y) const {
        if (!(y >= 0.0)) throw std::invalid_argument("RadialTransport::phi: y must be >= 0");
        if (y == 0.0) return 0.0;
        const double ly = std::log(y);
        if (ly <= lp_.front()) return std::exp(lx_.front() + (ly - lp_.front()) / slope_.front());
        if (ly >= lp_.back()) return y - offset_;
        // bracket the grid cell, then bisect the monotone interpolant
        const std::size_t j =
            std::upper_bound(lp_.begin(), lp_.end(), ly) - lp_.begin() - 1;
        double lo = lx_[j], hi = lx_[j + 1];
        for (int iter = 0; iter < 80 && hi - lo > 1e-14; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (eval_log(mid) < ly ? lo : hi) = mid;
        }
        return std::exp(0.5 * (lo + hi));
    }

  private:
    void build_slopes() {
        const std::size_t n = lx_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = lx_[i + 1] - lx_[i];
            delta[i] = (lp_[i + 1] - lp_[i]) / h[i];
        }
        slope_.assign(n, 0.0);
        slope_[0] = delta[0];
        slope_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) continue;  // local extremum: flat
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }

    double eval_log(double lx) const {
        const std::size_t j = std::min<std::size_t>(
            std::upper_bound(lx_.begin(), lx_.end(), lx) - lx_.begin() - 1, lx_.size() - 2);
        const double h = lx_[j + 1] - lx_[j];
        const double t = (lx - lx_[j]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * lp_[j] + (t3 - 2.0 * t2 + t) * h * slope_[j] +
               (-2.0 * t3 + 3.0 * t2) * lp_[j + 1] + (t3 - t2) * h * slope_[j + 1];
    }

    int d_ = 1;
    std::vector<double> lx_, lp_, slope_;
    double offset_ = 0.0;
};

// Piecewise-linear 1-stable path on [0,1]: node j/n holds (1/n) sum_{i<=j} X_i
// with X_i i.i.d. nu^sigma.  By 1-stability every node marginal matches the
// continuous-time process.
inline std::vector<AlgebraVec> stable_path(const StableParams& p, int n, Philox& rng) {
    if (n < 1) throw std::invalid_argument("stable_path: n must be >= 1");
    std::vector<AlgebraVec> nodes;
    nodes.reserve(n + 1);
    nodes.push_back(AlgebraVec(p.d, 0.0));
    for (int j = 1; j <= n; ++j) {
        AlgebraVec x = nu_sigma_sample(p, rng);
        for (int c = 0; c < p.d; ++c) x[c] = nodes.back()[c] + x[c] / n;
        nodes.push_back(std::move(x));
    }
    return nodes;
}

// Limit law on the group: the endpoint of the developed 1-stable path with
// the group's sigma; mesh n certified by doubling tests.
inline GroupElem nu_star_sample(const GroupKind& kind, int n, Philox& rng) {
    const StableParams p{kind.dim, sigma_for_group(kind.dim)};
    return develop_endpoint(kind, stable_path(p, n, rng));
}

}  // namespace looplab
