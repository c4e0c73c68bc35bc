#pragma once

// Counter-based random number generation (Philox4x32-10) plus the small set of
// samplers the simulations need.  A stream is identified by (seed, stream_id);
// streams are statistically independent and a given stream reproduces the same
// sequence no matter how other streams are interleaved, which is what lets
// replica r of an experiment be regenerated in isolation.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace looplab {

class Philox {
public:
    using result_type = std::uint32_t;

    Philox() : Philox(0, 0) {}
    Philox(std::uint64_t seed, std::uint64_t stream_id) {
        key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
        ctr_ = {0, 0,
                static_cast<std::uint32_t>(stream_id),
                static_cast<std::uint32_t>(stream_id >> 32)};
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }

    result_type operator()() {
        if (idx_ == 4) {
            buf_ = block(ctr_, key_);
            next_counter();
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = (*this)();
        const std::uint64_t hi = (*this)();
        return lo | (hi << 32);
    }

    // One keyed block; exposed so tests can pin known-answer vectors.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round != 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    void next_counter() {
        if (++ctr_[0] == 0) ++ctr_[1];  // words 2,3 hold the stream id
    }

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> ctr_{};
    std::array<std::uint32_t, 4> buf_{};
    int idx_ = 4;
};

// Double in [0, 1) with 53 random bits.
inline double uniform01(Philox& g) {
    return static_cast<double>(g.next_u64() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Philox& g, double a, double b) {
    return a + (b - a) * uniform01(g);
}

// Marsaglia polar method, no state carried between calls.
inline double normal01(Philox& g) {
    for (;;) {
        const double u = 2.0 * uniform01(g) - 1.0;
        const double v = 2.0 * uniform01(g) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

inline double cauchy01(Philox& g) {
    // Inverse CDF; u=1/2 maps to 0, endpoints excluded by the 53-bit grid.
    return std::tan(3.14159265358979323846 * (uniform01(g) - 0.5));
}

// Exact Poisson sampler: product-of-uniforms inversion for small means,
// Hormann's PTRS transformed rejection otherwise.
inline long long poisson(Philox& g, double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 12.0) {
        const double limit = std::exp(-mean);
        long long k = 0;
        double prod = uniform01(g);
        while (prod > limit) {
            ++k;
            prod *= uniform01(g);
        }
        return k;
    }
    const double slam = std::sqrt(mean);
    const double llam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform01(g) - 0.5;
        const double v = uniform01(g);
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * llam - mean - std::lgamma(kf + 1.0)) {
            return static_cast<long long>(kf);
        }
    }
}

// Uniform point in the open disk of given radius (polar inversion, exactly two
// uniforms per point so the stream layout is predictable).
inline std::array<double, 2> disk_point(Philox& g, double radius) {
    const double r = radius * std::sqrt(uniform01(g));
    const double phi = 2.0 * 3.14159265358979323846 * uniform01(g);
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Uniform direction on the unit sphere in dimension d (d=1 gives +-1).
inline std::vector<double> sphere_direction(Philox& g, int d) {
    std::vector<double> v(static_cast<std::size_t>(d));
    if (d == 1) {
        v[0] = uniform01(g) < 0.5 ? -1.0 : 1.0;
        return v;
    }
    for (;;) {
        double n2 = 0.0;
        for (auto& c : v) {
            c = normal01(g);
            n2 += c * c;
        }
        if (n2 > 1e-300) {
            const double inv = 1.0 / std::sqrt(n2);
            for (auto& c : v) c *= inv;
            return v;
        }
    }
}

}  // namespace looplab
