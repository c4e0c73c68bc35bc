#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "looplab/liegroup.hpp"
#include "looplab/rng.hpp"
#include "looplab/stable.hpp"

using namespace looplab;

namespace {

double ks_stat(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::max(std::abs(f - i / n), std::abs(f - (i + 1) / n)));
    }
    return d;
}

double ks2_stat(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

// 1% two-sample critical value
double ks2_crit(std::size_t n, std::size_t m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

double wrapped_cauchy_cdf_local(double gamma, double theta) {
    // wrap of a Cauchy(scale gamma): F on (-pi, pi]
    const double c = 1.0 / std::tanh(0.5 * gamma);
    return 0.5 + std::atan(c * std::tan(0.5 * theta)) / kLgPi;
}

}  // namespace

TEST_CASE("group scale constant") {
    CHECK(sigma_for_group(1) == Catch::Approx(0.5).margin(1e-14));
    CHECK(sigma_for_group(3) == Catch::Approx(0.25).margin(1e-14));
    double prev = sigma_for_group(1);
    for (int d = 2; d <= 40; ++d) {
        const double s = sigma_for_group(d);
        CHECK(s > 0.0);
        CHECK(s < prev);
        prev = s;
    }
    CHECK(transport_sigma(1) == Catch::Approx(1.0).margin(1e-14));
    CHECK(transport_sigma(3) == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("stable density normalization and scaling") {
    CHECK(nu_sigma_density({1, 1.0}, {0.0}) == Catch::Approx(1.0 / kLgPi).margin(1e-15));

    Philox rng(601, 0);
    for (const int d : {1, 3}) {
        for (const double sigma : {0.5, 1.0, 2.0}) {
            const StableParams p{d, sigma};
            // scaling: density_sigma(Z) = sigma^-d density_1(Z/sigma)
            for (int t = 0; t < 50; ++t) {
                AlgebraVec z(d);
                for (double& c : z) c = 3.0 * normal01(rng);
                AlgebraVec zs = z;
                for (double& c : zs) c /= sigma;
                CHECK(nu_sigma_density(p, z) ==
                      Catch::Approx(std::pow(sigma, -d) * nu_sigma_density({d, 1.0}, zs))
                          .epsilon(1e-12));
            }
            // radial quadrature of the density integrates to 1
            const double surf = 2.0 * std::pow(kLgPi, 0.5 * d) / std::tgamma(0.5 * d);
            double integral = 0.0;
            const int m = 4000;
            for (int i = 0; i < m; ++i) {
                const double phi = (i + 0.5) * (0.5 * kLgPi) / m;
                const double r = sigma * std::tan(phi);
                const double jac = sigma / (std::cos(phi) * std::cos(phi));
                AlgebraVec z(d, 0.0);
                z[0] = r;
                integral += nu_sigma_density(p, z) * surf * std::pow(r, d - 1) * jac *
                            (0.5 * kLgPi) / m;
            }
            CHECK(integral == Catch::Approx(1.0).margin(1e-6));
        }
    }

    // quadrature tail at 0 is exactly the full mass
    for (const int d : {1, 2, 3, 5}) CHECK(radial_tail(d, 0.0) == Catch::Approx(1.0).margin(1e-12));
    // closed forms for d = 1 and d = 3
    for (double x : {0.0, 0.1, 0.7, 2.0, 10.0, 300.0}) {
        CHECK(radial_tail(1, x) ==
              Catch::Approx(1.0 - (2.0 / kLgPi) * std::atan(x)).margin(1e-12));
        CHECK(radial_tail(3, x) ==
              Catch::Approx(1.0 - (2.0 / kLgPi) * (std::atan(x) - x / (1.0 + x * x)))
                  .margin(1e-12));
    }
}

TEST_CASE("gaussian-ratio sampler matches the analytic law") {
    Philox rng(602, 0);
    const int n = 100000;
    {
        const StableParams p{1, 0.5};
        std::vector<double> xs;
        xs.reserve(n);
        for (int i = 0; i < n; ++i) xs.push_back(nu_sigma_sample(p, rng)[0]);
        const double d = ks_stat(std::move(xs), [&](double z) {
            return 0.5 + std::atan(z / p.sigma) / kLgPi;
        });
        CHECK(d < 0.01);
    }
    {
        const StableParams p{3, 0.25};
        std::vector<double> rs;
        double mean[3] = {0.0, 0.0, 0.0};
        rs.reserve(n);
        for (int i = 0; i < n; ++i) {
            const AlgebraVec z = nu_sigma_sample(p, rng);
            const double r = algebra_norm(z);
            rs.push_back(r);
            for (int c = 0; c < 3; ++c) mean[c] += z[c] / r / n;
        }
        const double d = ks_stat(std::move(rs), [&](double r) {
            return radial_cdf(3, r / p.sigma);
        });
        CHECK(d < 0.01);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(mean[c]) < 4.0 / std::sqrt(3.0 * n));
    }
}

TEST_CASE("one-stability: averages keep the law") {
    Philox rng(603, 0);
    const StableParams p{3, 0.25};
    for (const int n_avg : {2, 7, 16}) {
        std::vector<double> rs;
        const int n = 20000;
        rs.reserve(n);
        for (int i = 0; i < n; ++i) {
            AlgebraVec acc(3, 0.0);
            for (int k = 0; k < n_avg; ++k) {
                const AlgebraVec z = nu_sigma_sample(p, rng);
                for (int c = 0; c < 3; ++c) acc[c] += z[c] / n_avg;
            }
            rs.push_back(algebra_norm(acc));
        }
        const double d = ks_stat(std::move(rs), [&](double r) {
            return radial_cdf(3, r / p.sigma);
        });
        CHECK(d < 0.015);
    }
}

TEST_CASE("radial transport solves the tail equation") {
    CHECK(psi_transport(1, 0.0) == 0.0);
    CHECK(psi_transport(3, 0.0) == 0.0);

    // d = 1: the transport is the identity
    for (double x : {1e-4, 0.039, 0.8, 3.0, 55.0, 900.0})
        CHECK(psi_transport(1, x) == Catch::Approx(x).epsilon(1e-9));

    // d = 3 closed form: psi = tan(arctan(2x) - 2x/(1+4x^2))
    for (double x : {1e-3, 0.07, 0.31, 1.4, 6.0, 120.0}) {
        const double oracle = std::tan(std::atan(2.0 * x) - 2.0 * x / (1.0 + 4.0 * x * x));
        CHECK(psi_transport(3, x) == Catch::Approx(oracle).epsilon(1e-8).margin(1e-10));
    }

    // monotone, with psi(x)-x bounded and vanishing far out for d=3
    for (const int d : {1, 2, 3}) {
        double prev = 0.0, worst = 0.0;
        for (int i = 1; i <= 60; ++i) {
            const double x = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
            const double v = psi_transport(d, x);
            CHECK(v > prev);
            prev = v;
            worst = std::max(worst, std::abs(v - x));
        }
        CHECK(worst < 0.8);
    }
    CHECK(std::abs(psi_transport(3, 1000.0) - 1000.0) < 0.01);

    // direct-route roundtrip
    for (int i = 0; i <= 40; ++i) {
        const double x = std::pow(10.0, -4.0 + 7.0 * i / 40.0);
        CHECK(phi_transport(3, psi_transport(3, x)) == Catch::Approx(x).epsilon(1e-8));
        CHECK(phi_transport(2, psi_transport(2, x)) == Catch::Approx(x).epsilon(1e-8));
    }
}

TEST_CASE("tabulated transport tracks the direct solver") {
    Philox rng(604, 0);
    for (const int d : {1, 3}) {
        const RadialTransport table(d);
        CHECK(table.psi(0.0) == 0.0);
        CHECK(table.phi(0.0) == 0.0);
        // strict monotonicity across a dense sweep
        double prev = 0.0;
        for (int i = 1; i <= 500; ++i) {
            const double x = std::pow(10.0, -7.0 + 12.0 * i / 500.0);
            const double v = table.psi(x);
            CHECK(v > prev);
            prev = v;
        }
        // agreement with the root-finding route at random points
        for (int t = 0; t < 60; ++t) {
            const double x = std::pow(10.0, -6.0 + 10.0 * uniform01(rng));
            CHECK(table.psi(x) == Catch::Approx(psi_transport(d, x)).epsilon(1e-5));
            const double y = std::pow(10.0, -6.0 + 10.0 * uniform01(rng));
            CHECK(table.phi(y) == Catch::Approx(phi_transport(d, y)).epsilon(1e-5));
        }
        // solver-exact roundtrip through the interpolant, beyond the grid too
        for (int i = 0; i <= 60; ++i) {
            const double x = std::pow(10.0, -7.0 + 12.0 * i / 60.0);
            CHECK(table.phi(table.psi(x)) == Catch::Approx(x).epsilon(1e-8));
        }
    }
}

TEST_CASE("scalar cauchy pushed through phi matches the radial law") {
    Philox rng(605, 0);
    for (const int d : {1, 3}) {
        const RadialTransport table(d);
        const double sig = transport_sigma(d);
        std::vector<double> xs;
        const int n = 100000;
        xs.reserve(n);
        for (int i = 0; i < n; ++i) xs.push_back(table.phi(std::abs(cauchy01(rng))));
        const double ks = ks_stat(std::move(xs), [&](double x) {
            return radial_cdf(d, x / sig);
        });
        CHECK(ks < 0.02);
    }
}

TEST_CASE("stable paths: structure and node marginals") {
    Philox rng(606, 0);
    const StableParams p1{1, 0.5};

    const auto single = stable_path(p1, 1, rng);
    REQUIRE(single.size() == 2);
    CHECK(single[0][0] == 0.0);

    const auto nodes = stable_path(p1, 16, rng);
    REQUIRE(nodes.size() == 17);
    CHECK(nodes[0][0] == 0.0);

    // endpoint marginal is nu^sigma by 1-stability
    std::vector<double> ends;
    const int n = 10000;
    ends.reserve(n);
    for (int i = 0; i < n; ++i) ends.push_back(stable_path(p1, 16, rng).back()[0]);
    const double d = ks_stat(ends, [&](double z) { return 0.5 + std::atan(2.0 * z) / kLgPi; });
    CHECK(d < 0.02);

    // doubling the mesh leaves the endpoint law alone
    std::vector<double> ends2;
    ends2.reserve(n);
    for (int i = 0; i < n; ++i) ends2.push_back(stable_path(p1, 32, rng).back()[0]);
    CHECK(ks2_stat(ends, ends2) < ks2_crit(n, n));
}

TEST_CASE("developed limit law on the circle is wrapped cauchy") {
    Philox rng(607, 0);
    const GroupKind t1 = GroupKind::torus(1);
    std::vector<double> angles;
    const int n = 10000;
    angles.reserve(n);
    for (int i = 0; i < n; ++i) angles.push_back(nu_star_sample(t1, 4096, rng).angles[0]);
    const double d = ks_stat(std::move(angles), [](double th) {
        return wrapped_cauchy_cdf_local(0.5, th);
    });
    CHECK(d < 0.02);
}

TEST_CASE("developed limit law on SU2: mesh stability and isotropy") {
    Philox rng(608, 0);
    const GroupKind su2 = GroupKind::su2();

    const auto collect = [&](int mesh, int count, Philox& r) {
        std::vector<double> ds;
        ds.reserve(count);
        for (int i = 0; i < count; ++i)
            ds.push_back(group_distance(su2, nu_star_sample(su2, mesh, r), identity(su2)));
        return ds;
    };
    const auto a = collect(128, 2000, rng);
    const auto b = collect(256, 2000, rng);
    CHECK(ks2_stat(a, b) < ks2_crit(2000, 2000));

    // conjugating by a fixed element leaves the law invariant (isotropy)
    Philox r1(608, 1), r2(608, 2);
    const GroupElem g = haar_sample(su2, rng);
    std::vector<double> coords, conj_coords;
    for (int i = 0; i < 2500; ++i) {
        try {
            coords.push_back(log_g(su2, nu_star_sample(su2, 128, r1))[0]);
        } catch (const BranchError&) {
        }
        try {
            conj_coords.push_back(log_g(su2, conj(su2, g, nu_star_sample(su2, 128, r2)))[0]);
        } catch (const BranchError&) {
        }
    }
    CHECK(ks2_stat(coords, conj_coords) < ks2_crit(coords.size(), conj_coords.size()));
}

TEST_CASE("increment order does not matter") {
    Philox rng(609, 0);
    // torus: the endpoint is the wrapped sum, exactly order-free
    const GroupKind t2 = GroupKind::torus(2);
    const StableParams p2{2, sigma_for_group(2)};
    for (int t = 0; t < 20; ++t) {
        auto nodes = stable_path(p2, 200, rng);
        std::vector<AlgebraVec> inc;
        for (std::size_t j = 1; j < nodes.size(); ++j)
            inc.push_back(algebra_add(nodes[j], algebra_scale(-1.0, nodes[j - 1])));
        const GroupElem before = develop_endpoint(t2, nodes);
        std::shuffle(inc.begin(), inc.end(), rng);
        std::vector<AlgebraVec> rebuilt{AlgebraVec(2, 0.0)};
        for (const AlgebraVec& v : inc) rebuilt.push_back(algebra_add(rebuilt.back(), v));
        CHECK(group_distance(t2, before, develop_endpoint(t2, rebuilt)) < 1e-9);
    }

    // SU2: statistically undetectable at test power
    const GroupKind su2 = GroupKind::su2();
    const StableParams p3{3, sigma_for_group(3)};
    std::vector<double> plain, shuffled;
    for (int i = 0; i < 1500; ++i) {
        plain.push_back(group_distance(su2, develop_endpoint(su2, stable_path(p3, 64, rng)),
                                       identity(su2)));
        auto nodes = stable_path(p3, 64, rng);
        std::vector<AlgebraVec> inc;
        for (std::size_t j = 1; j < nodes.size(); ++j)
            inc.push_back(algebra_add(nodes[j], algebra_scale(-1.0, nodes[j - 1])));
        std::shuffle(inc.begin(), inc.end(), rng);
        std::vector<AlgebraVec> rebuilt{AlgebraVec(3, 0.0)};
        for (const AlgebraVec& v : inc) rebuilt.push_back(algebra_add(rebuilt.back(), v));
        shuffled.push_back(group_distance(su2, develop_endpoint(su2, rebuilt), identity(su2)));
    }
    CHECK(ks2_stat(plain, shuffled) < ks2_crit(plain.size(), shuffled.size()));
}
