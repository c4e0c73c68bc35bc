#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "looplab/braid.hpp"
#include "looplab/liegroup.hpp"
#include "looplab/rng.hpp"

using namespace looplab;

namespace {

GroupTuple random_tuple(const GroupKind& kind, int n, Philox& rng) {
    GroupTuple t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back(haar_sample(kind, rng));
    return t;
}

double tuple_dist(const GroupKind& kind, const GroupTuple& a, const GroupTuple& b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, group_distance(kind, a[i], b[i]));
    return d;
}

}  // namespace

TEST_CASE("generator action formula") {
    Philox rng(801, 0);
    for (const GroupKind kind : {GroupKind::su2(), GroupKind::so3(), GroupKind::torus(2)}) {
        for (int t = 0; t < 50; ++t) {
            const GroupTuple g = random_tuple(kind, 3, rng);
            const GroupTuple out = act(kind, make_braid(3, {1}), g);
            CHECK(group_distance(kind, out[0], g[1]) < 1e-12);
            const GroupElem conj01 =
                mul(kind, mul(kind, inverse(kind, g[1]), g[0]), g[1]);
            CHECK(group_distance(kind, out[1], conj01) < 1e-12);
            CHECK(group_distance(kind, out[2], g[2]) < 1e-12);
        }
    }
}

TEST_CASE("empty braid and input validation") {
    Philox rng(802, 0);
    const GroupKind su2 = GroupKind::su2();
    const GroupTuple g = random_tuple(su2, 4, rng);
    CHECK(tuple_dist(su2, act(su2, make_braid(4, {}), g), g) < 1e-15);

    CHECK_THROWS_AS(make_braid(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_braid(3, {3}), std::invalid_argument);
    CHECK_THROWS_AS(make_braid(3, {0}), std::invalid_argument);
    CHECK_THROWS_AS(make_braid(3, {-4}), std::invalid_argument);
    CHECK_THROWS_AS(act(su2, make_braid(3, {1}), g), std::invalid_argument);
    CHECK_THROWS_AS(concat(make_braid(2, {}), make_braid(3, {})), std::invalid_argument);
}

TEST_CASE("inverse generators undo the action") {
    Philox rng(803, 0);
    const GroupKind su2 = GroupKind::su2();
    // spec'd group-action axiom on the single generator
    for (int t = 0; t < 30; ++t) {
        const GroupTuple g = random_tuple(su2, 2, rng);
        const GroupTuple back = act(su2, make_braid(2, {-1}), act(su2, make_braid(2, {1}), g));
        CHECK(tuple_dist(su2, back, g) < 1e-12);
    }
    // random words: b^-1 . b acts as the identity
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const BraidWord b = random_braid(rng, n, 12);
        const GroupTuple g = random_tuple(su2, n, rng);
        CHECK(tuple_dist(su2, act(su2, concat(inverse(b), b), g), g) < 1e-11);
        CHECK(tuple_dist(su2, act(su2, concat(b, inverse(b)), g), g) < 1e-11);
    }
}

TEST_CASE("braid relations hold as maps") {
    Philox rng(804, 0);
    for (const GroupKind kind : {GroupKind::su2(), GroupKind::so3()}) {
        for (int i = 1; i <= 2; ++i) {
            for (int t = 0; t < 30; ++t) {
                const GroupTuple g = random_tuple(kind, 4, rng);
                const GroupTuple lhs = act(kind, make_braid(4, {i, i + 1, i}), g);
                const GroupTuple rhs = act(kind, make_braid(4, {i + 1, i, i + 1}), g);
                CHECK(tuple_dist(kind, lhs, rhs) < 1e-12);
            }
        }
        // distant generators commute
        for (int t = 0; t < 30; ++t) {
            const GroupTuple g = random_tuple(kind, 4, rng);
            const GroupTuple lhs = act(kind, make_braid(4, {1, 3}), g);
            const GroupTuple rhs = act(kind, make_braid(4, {3, 1}), g);
            CHECK(tuple_dist(kind, lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("permutation representation") {
    CHECK(perm_of(make_braid(2, {1})) == std::vector<int>{1, 0});
    CHECK(perm_of(make_braid(2, {1, 1})) == std::vector<int>{0, 1});
    // b1 b2 on 3 strands is a 3-cycle
    const auto cyc = perm_of(make_braid(3, {1, 2}));
    CHECK(cyc == std::vector<int>{2, 0, 1});
    // signs do not matter
    CHECK(perm_of(make_braid(3, {-1, 2})) == cyc);

    Philox rng(805, 0);
    // homomorphism under diagrammatic composition
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const BraidWord a = random_braid(rng, n, 1 + rng.next_u64() % 10);
        const BraidWord b = random_braid(rng, n, 1 + rng.next_u64() % 10);
        const auto pa = perm_of(a), pb = perm_of(b), pc = perm_of(concat(a, b));
        for (int j = 0; j < n; ++j) CHECK(pc[j] == pb[pa[j]]);
    }
    // slotwise: slot j of the acted tuple is exactly a conjugate of the
    // permuted source, so class coordinates agree pointwise
    for (const GroupKind kind : {GroupKind::su2(), GroupKind::torus(2)}) {
        for (int t = 0; t < 40; ++t) {
            const int n = 2 + static_cast<int>(rng.next_u64() % 5);
            const BraidWord b = random_braid(rng, n, 10);
            const GroupTuple g = random_tuple(kind, n, rng);
            const GroupTuple out = act(kind, b, g);
            const auto perm = perm_of(b);
            for (int j = 0; j < n; ++j) {
                const auto ca = class_coordinate(kind, out[j]);
                const auto cb = class_coordinate(kind, g[perm[j]]);
                for (std::size_t c = 0; c < ca.size(); ++c)
                    CHECK(ca[c] == Catch::Approx(cb[c]).margin(1e-11));
            }
        }
    }
}

TEST_CASE("json serialization") {
    const BraidWord b = make_braid(5, {1, -3, 2, 2, -4});
    const auto j = braid_to_json(b);
    CHECK(j["strands"] == 5);
    CHECK(j["word"] == std::vector<int>{1, -3, 2, 2, -4});
    const BraidWord back = braid_from_json(j);
    CHECK(back.strands == 5);
    REQUIRE(back.gens.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(back.gens[i].index == b.gens[i].index);
        CHECK(back.gens[i].sign == b.gens[i].sign);
    }
    CHECK_THROWS_AS(braid_from_json(nlohmann::json{{"strands", 3}, {"word", {7}}}),
                    std::invalid_argument);
}

TEST_CASE("invariance: identity braid compares equal samples") {
    Philox rng(806, 0);
    const GroupKind su2 = GroupKind::su2();
    const auto law = [&](int, Philox& r) { return haar_sample(su2, r); };
    const auto rep = invariance_test(su2, law, make_braid(3, {}), 300, rng);
    CHECK(rep.pass);
    for (const TestReport& t : rep.checks) {
        CHECK(t.statistic == 0.0);
        CHECK(t.p_value == 1.0);
    }
}

TEST_CASE("invariance holds for conjugation-invariant slot laws") {
    Philox rng(807, 0);
    const GroupKind su2 = GroupKind::su2();
    // distinct conjugation-invariant laws per slot: fixed-radius exponentials
    const std::vector<double> radius{0.4, 0.9, 1.6};
    const auto law = [&](int slot, Philox& r) {
        return exp_g(su2, sphere_sample(su2, radius[slot], r));
    };
    const auto rep =
        invariance_test(su2, law, make_braid(3, {1, -2, 1}), 20000, rng);
    for (const TestReport& t : rep.checks) INFO(t.name << " p=" << t.p_value);
    CHECK(rep.pass);

    // torus slots: the action reduces to the permutation, exact equality
    const GroupKind t1 = GroupKind::torus(1);
    const auto tlaw = [&](int slot, Philox& r) {
        return exp_g(t1, sphere_sample(t1, 0.3 + 0.2 * slot, r));
    };
    const auto trep = invariance_test(t1, tlaw, make_braid(3, {2, 1}), 500, rng);
    CHECK(trep.pass);
    for (const TestReport& t : trep.checks) CHECK(t.statistic == 0.0);
}

TEST_CASE("invariance test rejects non-invariant slot laws") {
    Philox rng(808, 0);
    const GroupKind su2 = GroupKind::su2();
    // slot laws concentrated around rotations with distinct fixed axes:
    // conjugation moves the axis, so the braid action is detectable
    const auto law = [&](int slot, Philox& r) {
        AlgebraVec axis(3, 0.0);
        axis[slot] = 0.8;
        return mul(su2, exp_g(su2, axis), exp_g(su2, sphere_sample(su2, 0.05, r)));
    };
    const auto rep = invariance_test(su2, law, make_braid(3, {1}), 20000, rng);
    CHECK_FALSE(rep.pass);
    // the discriminating observable is the (2,3) adjacent product
    bool adj23_rejected = false;
    for (const TestReport& t : rep.checks)
        if (t.name.rfind("adj23", 0) == 0 && !t.pass) adj23_rejected = true;
    CHECK(adj23_rejected);
}
