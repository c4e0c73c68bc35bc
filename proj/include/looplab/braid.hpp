#pragma once
// Artin braid group B_n acting on n-tuples of group elements, its permutation
// representation, and a statistical check that the action preserves the joint
// law of tuples with independent conjugation-invariant slot laws.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "looplab/harness.hpp"
#include "looplab/liegroup.hpp"
#include "looplab/rng.hpp"

namespace looplab {

struct BraidGen {
    int index = 1;  // 1-based, in {1, ..., strands-1}
    int sign = +1;
};

// A word in the braid generators, leftmost factor first.
struct BraidWord {
    int strands = 0;
    std::vector<BraidGen> gens;
};

inline BraidWord make_braid(int strands, const std::vector<int>& signed_gens) {
    if (strands < 1) throw std::invalid_argument("make_braid: strands must be >= 1");
    BraidWord b{strands, {}};
    b.gens.reserve(signed_gens.size());
    for (int s : signed_gens) {
        const int i = std::abs(s);
        if (s == 0 || i > strands - 1)
            throw std::invalid_argument("make_braid: generator index out of range");
        b.gens.push_back({i, s > 0 ? +1 : -1});
    }
    return b;
}

inline BraidWord inverse(const BraidWord& b) {
    BraidWord r{b.strands, {}};
    r.gens.reserve(b.gens.size());
    for (auto it = b.gens.rbegin(); it != b.gens.rend(); ++it)
        r.gens.push_back({it->index, -it->sign});
    return r;
}

inline BraidWord concat(const BraidWord& a, const BraidWord& b) {
    if (a.strands != b.strands) throw std::invalid_argument("concat: strand counts differ");
    BraidWord r = a;
    r.gens.insert(r.gens.end(), b.gens.begin(), b.gens.end());
    return r;
}

inline nlohmann::json braid_to_json(const BraidWord& b) {
    std::vector<int> word;
    word.reserve(b.gens.size());
    for (const BraidGen& g : b.gens) word.push_back(g.sign * g.index);
    return nlohmann::json{{"strands", b.strands}, {"word", word}};
}

inline BraidWord braid_from_json(const nlohmann::json& j) {
    return make_braid(j.at("strands").get<int>(), j.at("word").get<std::vector<int>>());
}

using GroupTuple = std::vector<GroupElem>;

// Left action of the braid word on tuples:
//   b_i:      (g_i, g_{i+1}) -> (g_{i+1}, g_{i+1}^-1 g_i g_{i+1})
//   b_i^-1:   (g_i, g_{i+1}) -> (g_i g_{i+1} g_i^-1, g_i)
// A word acts with its rightmost factor first, so act(a.b, x) = act(a, act(b, x)).
inline GroupTuple act(const GroupKind& kind, const BraidWord& b, GroupTuple g) {
    if (static_cast<int>(g.size()) != b.strands)
        throw std::invalid_argument("act: tuple length must equal strand count");
    for (auto it = b.gens.rbegin(); it != b.gens.rend(); ++it) {
        const int i = it->index - 1;
        const GroupElem a = g[i], c = g[i + 1];
        if (it->sign > 0) {
            g[i] = c;
            g[i + 1] = mul(kind, mul(kind, inverse(kind, c), a), c);
        } else {
            g[i] = mul(kind, mul(kind, a, c), inverse(kind, a));
            g[i + 1] = a;
        }
    }
    return g;
}

// Source map of the induced permutation: slot j of act(b, g) is a conjugate of
// g[perm_of(b)[j]] (0-based).  Composes diagrammatically:
// perm_of(a.b)[j] = perm_of(b)[perm_of(a)[j]].
inline std::vector<int> perm_of(const BraidWord& b) {
    std::vector<int> p(b.strands);
    std::iota(p.begin(), p.end(), 0);
    for (auto it = b.gens.rbegin(); it != b.gens.rend(); ++it)
        std::swap(p[it->index - 1], p[it->index]);
    return p;
}

struct InvarianceReport {
    std::vector<TestReport> checks;  // one per compared class coordinate
    double alpha = 0.01;             // suite level; Bonferroni split inside
    bool pass = false;
};

// Statistical check of the invariance lemma: for a tuple X of independent
// samples with conjugation-invariant slot laws, act(b, X) has the same joint
// law as the permuted tuple (X_{perm(j)})_j.  Both sides are built from the
// same draws, so the identity braid compares equal samples (p = 1) and any
// braid matches slotwise exactly; power against broken preconditions comes
// from the adjacent-product coordinates.
inline InvarianceReport invariance_test(const GroupKind& kind,
                                        const std::function<GroupElem(int, Philox&)>& slot_law,
                                        const BraidWord& b, int samples, Philox& rng,
                                        double alpha = 0.01) {
    if (samples < 2) throw std::invalid_argument("invariance_test: need at least 2 samples");
    const int n = b.strands;
    const std::vector<int> perm = perm_of(b);
    const std::size_t cdim = class_coordinate(kind, identity(kind)).size();
    const std::size_t n_obs = static_cast<std::size_t>(n) + (n > 1 ? n - 1 : 0);

    std::vector<std::vector<double>> acted(n_obs * cdim), permuted(n_obs * cdim);
    for (auto& v : acted) v.reserve(samples);
    for (auto& v : permuted) v.reserve(samples);

    GroupTuple x(n, identity(kind));
    for (int rep = 0; rep < samples; ++rep) {
        for (int j = 0; j < n; ++j) x[j] = slot_law(j, rng);
        const GroupTuple a = act(kind, b, x);
        GroupTuple p(n, identity(kind));
        for (int j = 0; j < n; ++j) p[j] = x[perm[j]];

        // Coordinates are snapped to a fixed grid much finer than any law we
        // compare but much coarser than rounding noise: when a slot law has
        // atoms (e.g. fixed-radius classes), the conjugations inside act()
        // perturb the last bits and exact-tie KS would split each atom into
        // "distinct" values, inflating the distance by the atom mass.
        constexpr double q = 1e-9;
        const auto snap = [q](double v) { return std::round(v / q) * q; };
        const auto push = [&](std::size_t obs, const GroupElem& ga, const GroupElem& gp) {
            const auto ca = class_coordinate(kind, ga);
            const auto cp = class_coordinate(kind, gp);
            for (std::size_t c = 0; c < cdim; ++c) {
                acted[obs * cdim + c].push_back(snap(ca[c]));
                permuted[obs * cdim + c].push_back(snap(cp[c]));
            }
        };
        for (int j = 0; j < n; ++j) push(j, a[j], p[j]);
        for (int j = 0; j + 1 < n; ++j)
            push(n + j, mul(kind, a[j], a[j + 1]), mul(kind, p[j], p[j + 1]));
    }

    InvarianceReport report;
    report.alpha = alpha;
    const double cut = alpha / static_cast<double>(n_obs * cdim);
    for (std::size_t obs = 0; obs < n_obs; ++obs) {
        for (std::size_t c = 0; c < cdim; ++c) {
            const std::string name =
                (obs < static_cast<std::size_t>(n)
                     ? "slot" + std::to_string(obs + 1)
                     : "adj" + std::to_string(obs - n + 1) + std::to_string(obs - n + 2)) +
                "_c" + std::to_string(c);
            report.checks.push_back(report_p_above(
                name, ks_distance(acted[obs * cdim + c], permuted[obs * cdim + c]), cut));
        }
    }
    report.pass = true;
    for (const TestReport& r : report.checks) report.pass = report.pass && r.pass;
    return report;
}

// Random braid word, handy for property tests.
inline BraidWord random_braid(Philox& rng, int strands, int length) {
    if (strands < 2) throw std::invalid_argument("random_braid: need >= 2 strands");
    std::vector<int> gens;
    gens.reserve(length);
    for (int i = 0; i < length; ++i) {
        const int idx = 1 + static_cast<int>(rng.next_u64() % (strands - 1));
        gens.push_back((rng.next_u64() & 1) ? idx : -idx);
    }
    return make_braid(strands, gens);
}

}  // namespace looplab
