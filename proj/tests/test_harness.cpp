#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "looplab/harness.hpp"
#include "looplab/liegroup.hpp"
#include "looplab/rng.hpp"

using namespace looplab;

TEST_CASE("kolmogorov survival function") {
    CHECK(kolmogorov_q(0.0) == 1.0);
    // reference values (both evaluation branches)
    CHECK(kolmogorov_q(0.3) == Catch::Approx(0.99999069419866549).margin(1e-12));
    CHECK(kolmogorov_q(0.5) == Catch::Approx(0.96394524366487511).margin(1e-12));
    CHECK(kolmogorov_q(0.82757355518990761) == Catch::Approx(0.5).margin(1e-12));
    CHECK(kolmogorov_q(1.0) == Catch::Approx(0.26999967167735456).margin(1e-12));
    CHECK(kolmogorov_q(1.5) == Catch::Approx(0.022217962616525127).margin(1e-12));
    CHECK(kolmogorov_q(2.0) == Catch::Approx(0.00067092525577969533).margin(1e-12));
    double prev = 1.0;
    for (int i = 1; i <= 80; ++i) {
        const double q = kolmogorov_q(0.05 * i);
        CHECK(q <= prev);
        prev = q;
    }
    CHECK_THROWS_AS(kolmogorov_q(-0.1), std::invalid_argument);
}

TEST_CASE("class coordinates are conjugation invariant") {
    Philox rng(701, 0);
    for (const GroupKind kind : {GroupKind::torus(2), GroupKind::su2(), GroupKind::so3()}) {
        const auto at_id = class_coordinate(kind, identity(kind));
        for (double c : at_id) CHECK(c == 0.0);
        for (int t = 0; t < 200; ++t) {
            const GroupElem g = haar_sample(kind, rng);
            const GroupElem h = haar_sample(kind, rng);
            const auto a = class_coordinate(kind, g);
            const auto b = class_coordinate(kind, conj(kind, h, g));
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(a[i] == Catch::Approx(b[i]).margin(1e-12));
        }
    }
    GroupElem t1 = identity(GroupKind::torus(1));
    t1.angles[0] = 0.3;
    CHECK(class_coordinate(GroupKind::torus(1), t1) == std::vector<double>{0.3});
}

TEST_CASE("one-sample KS calibration") {
    Philox rng(702, 0);
    const auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };

    std::vector<double> xs(100000);
    for (double& x : xs) x = uniform01(rng);
    const KsResult big = ks_distance(xs, unit);
    CHECK(big.statistic < 0.01);
    CHECK(big.n1 == 100000);

    // p-values are uniform under the null
    std::vector<double> ps;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> s(500);
        for (double& x : s) x = uniform01(rng);
        ps.push_back(ks_distance(s, unit).p_value);
    }
    CHECK(ks_distance(ps, unit).statistic < 1.628 / std::sqrt(200.0));

    // negative control: shifted Gaussian against the standard normal CDF
    std::vector<double> shifted(2000);
    for (double& x : shifted) x = normal01(rng) + 0.3;
    const auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    CHECK(ks_distance(shifted, phi).p_value < 1e-6);

    CHECK_THROWS_AS(ks_distance(std::vector<double>{}, unit), std::invalid_argument);
}

TEST_CASE("two-sample KS") {
    Philox rng(703, 0);
    std::vector<double> a(5000), b(5000);
    for (double& x : a) x = normal01(rng);

    // a sample against itself: exactly zero, p = 1
    const KsResult self = ks_distance(a, a);
    CHECK(self.statistic == 0.0);
    CHECK(self.p_value == 1.0);

    // same law: comfortably not rejected
    for (double& x : b) x = normal01(rng);
    const KsResult null_case = ks_distance(a, b);
    CHECK(null_case.p_value > 0.01);
    CHECK(null_case.n1 == 5000);
    CHECK(null_case.n2 == 5000);

    // disjoint supports: statistic 1
    std::vector<double> lo(100, 0.0), hi(100, 1.0);
    for (std::size_t i = 0; i < lo.size(); ++i) lo[i] = i * 0.001;
    for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = 10.0 + i * 0.001;
    CHECK(ks_distance(lo, hi).statistic == 1.0);

    // different laws: rejected
    std::vector<double> c(5000);
    for (double& x : c) x = 1.25 * normal01(rng);
    CHECK(ks_distance(a, c).p_value < 1e-4);
}

TEST_CASE("wrapped cauchy reference cdf") {
    CHECK(wrapped_cauchy_cdf(0.5, 0.0) == 0.5);
    CHECK(wrapped_cauchy_cdf(0.5, 1.0) == Catch::Approx(0.86584624156035251).margin(1e-14));
    CHECK(wrapped_cauchy_cdf(0.5, -2.0) == Catch::Approx(0.049650922261679767).margin(1e-14));
    CHECK(wrapped_cauchy_cdf(0.5, 3.0) == Catch::Approx(0.99447203231182086).margin(1e-14));
    CHECK(wrapped_cauchy_cdf(1.3, 0.7) == Catch::Approx(0.68088587456238202).margin(1e-14));
    CHECK(wrapped_cauchy_cdf(0.1, 0.5) == Catch::Approx(0.93849866688011711).margin(1e-14));
    CHECK(wrapped_cauchy_cdf(0.5, -kLgPi) == 0.0);
    CHECK(wrapped_cauchy_cdf(0.5, kLgPi) == 1.0);
    double prev = -0.1;
    for (int i = 0; i <= 100; ++i) {
        const double th = -kLgPi + 2.0 * kLgPi * i / 100.0;
        const double f = wrapped_cauchy_cdf(0.5, th);
        CHECK(f >= prev);
        prev = f;
    }
    CHECK_THROWS_AS(wrapped_cauchy_cdf(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("report helpers") {
    const TestReport ok = report_stat_below("gap", 0.03, 0.05, 1000);
    CHECK(ok.pass);
    CHECK_FALSE(report_stat_below("gap", 0.07, 0.05).pass);

    KsResult ks{0.02, 0.4, 100, 100};
    CHECK(report_p_above("cmp", ks, 0.01).pass);
    ks.p_value = 0.002;
    CHECK_FALSE(report_p_above("cmp", ks, 0.01).pass);

    std::vector<TestReport> suite;
    for (int i = 0; i < 5; ++i) {
        KsResult r{0.01, 0.5, 10, 10};
        suite.push_back(report_p_above("t", r, 0.01));
    }
    CHECK(bonferroni_pass(suite, 0.01));
    suite[2].p_value = 0.0005;  // below 0.01 / 5
    CHECK_FALSE(bonferroni_pass(suite, 0.01));
    suite[2].p_value = 0.003;  // above 0.01 / 5
    CHECK(bonferroni_pass(suite, 0.01));
}

TEST_CASE("csv writer") {
    std::ostringstream os;
    write_csv(os, {"id", "v"}, {{"1", csv_num(0.5)}, {"2", csv_num(-3.0)}});
    CHECK(os.str() == "id,v\n1,0.5\n2,-3\n");
    std::ostringstream bad;
    CHECK_THROWS_AS(write_csv(bad, {"a", "b"}, {{"1"}}), std::invalid_argument);
}
