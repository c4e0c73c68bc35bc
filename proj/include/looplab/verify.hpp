#pragma once
// End-to-end verification suite: twelve numbered checks covering the exact
// algebraic identities (words, decompositions, bounds) and the statistical
// limits (Cauchy/stable holonomy laws, area constants, invariances) at fixed
// sample sizes and tolerances.  Every check derives its random streams from
// the caller's seed, so two runs with the same seed produce identical
// results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "looplab/braid.hpp"
#include "looplab/freegroup.hpp"
#include "looplab/geometry.hpp"
#include "looplab/harness.hpp"
#include "looplab/homotopy.hpp"
#include "looplab/liegroup.hpp"
#include "looplab/model.hpp"
#include "looplab/rng.hpp"
#include "looplab/stable.hpp"

namespace looplab {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;    // deterministic given the seed
    double seconds = 0.0;  // wall time; excluded from deterministic output
};

namespace verify_detail {

inline std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1. Exact identity between the abelianized homotopy word and the winding
//    number, at every puncture of every replica.
inline CriterionResult word_winding_identity(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.K = 200.0;
    cfg.R = 2.0;
    cfg.n_steps = 10000;
    long long checked = 0, mismatches = 0, resamples = 0;
    for (int r = 0; r < 1000; ++r) {
        Philox rng(seed + 100, 1 + static_cast<std::uint64_t>(r));
        for (int attempt = 0;; ++attempt) {
            if (attempt > 200) throw DegeneracyError("word_winding_identity: stuck replica");
            try {
                const PunctureSample cloud = sample_punctures(cfg, rng);
                const PolyPath loop = close_loop(sample_brownian(cfg.n_steps, rng));
                const Word w = word_of_loop(loop, RayIndex(cloud.ps));
                std::vector<std::int64_t> th(cloud.ps.size(), 0);
                for (const Letter l : w.letters)
                    th[static_cast<std::size_t>(std::abs(l)) - 1] += l > 0 ? 1 : -1;
                const WindingIndex idx(loop);
                long long c = 0, mm = 0;
                for (std::size_t i = 0; i < cloud.ps.size(); ++i) {
                    int wv = 0;
                    if (!idx.try_winding(cloud.ps.points[i], wv))
                        throw DegeneracyError("puncture on loop");
                    if (wv != th[i]) ++mm;
                    ++c;
                }
                checked += c;
                mismatches += mm;
                break;
            } catch (const DegeneracyError&) {
                ++resamples;
            }
        }
    }
    CriterionResult res;
    res.pass = mismatches == 0;
    res.detail = fmt("replicas=1000 punctures=%lld mismatches=%lld resamples=%lld", checked,
                     mismatches, resamples);
    return res;
}

// Shared corpus for checks 2 and 3.
inline Word corpus_word(Philox& rng, std::int32_t& alphabet) {
    alphabet = 1 + static_cast<std::int32_t>(rng.next_u64() % 20);
    const std::size_t len = 1 + static_cast<std::size_t>(rng.next_u64() % 200);
    return random_reduced_word(rng, len, alphabet);
}

// 2. The per-generator components multiply back to the word, prefix by
//    prefix: c_1 ... c_x equals the restriction of the word to letters <= x.
inline CriterionResult decomposition_reconstruction(std::uint64_t seed) {
    Philox rng(seed + 200, 0);
    long long failures = 0;
    for (int t = 0; t < 10000; ++t) {
        std::int32_t m = 0;
        const Word g = corpus_word(rng, m);
        Word prod;
        bool ok = true;
        for (std::int32_t x = 1; x <= m; ++x) {
            prod = concat(prod, semidirect_component(g, x));
            if (!(prod == project_leq(g, x))) ok = false;
        }
        if (!(prod == g)) ok = false;
        if (!ok) ++failures;
    }
    CriterionResult res;
    res.pass = failures == 0;
    res.detail = fmt("words=10000 failures=%lld", failures);
    return res;
}

// 3. Exponent-sequence refinement chain: component <= restriction <= word,
//    in the merge order, for every generator of every corpus word.
inline CriterionResult refinement_chain(std::uint64_t seed) {
    Philox rng(seed + 200, 0);  // same corpus as check 2
    long long chains = 0, failures = 0;
    for (int t = 0; t < 10000; ++t) {
        std::int32_t m = 0;
        const Word g = corpus_word(rng, m);
        for (std::int32_t x = 1; x <= m; ++x) {
            const auto ac = alpha_seq(semidirect_component(g, x), x);
            const auto ap = alpha_seq(project_leq(g, x), x);
            const auto ag = alpha_seq(g, x);
            ++chains;
            if (!refines(ac, ap) || !refines(ap, ag)) ++failures;
        }
    }
    CriterionResult res;
    res.pass = failures == 0;
    res.detail = fmt("words=10000 chains=%lld failures=%lld", chains, failures);
    return res;
}

// 4. The l1 norm of each puncture's exponent sequence is bounded by its
//    half-turn count, on full-size replicas.
inline CriterionResult halfturn_l1_bound(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.K = 200.0;
    cfg.R = 2.0;
    cfg.n_steps = 100000;
    cfg.replicas = 500;
    cfg.seed = seed + 400;
    long long punctures = 0, violations = 0;
    RunOptions opt;
    opt.store_replicas = false;
    opt.on_replica = [&](const ReplicaReport& rr) {
        for (const PunctureStats& st : rr.table) {
            std::int64_t l1 = 0;
            for (const std::int64_t a : st.alpha) l1 += std::llabs(a);
            if (l1 > st.theta_half) ++violations;
            ++punctures;
        }
    };
    run_experiment(cfg, opt);
    CriterionResult res;
    res.pass = violations == 0;
    res.detail = fmt("replicas=500 punctures=%lld violations=%lld", punctures, violations);
    return res;
}

// 5. The area of the deep-winding region times the depth approaches 1/pi.
inline CriterionResult winding_area_constant(std::uint64_t seed) {
    Philox path_rng(seed + 500, 0);
    const PolyPath loop = close_loop(sample_brownian(1000000, path_rng));
    const double rr = max_radius(loop);
    Philox rng(seed + 500, 1);
    double ratio[3] = {0, 0, 0};
    const int ks[3] = {8, 16, 32};
    bool pass = true;
    for (int i = 0; i < 3; ++i) {
        const AreaEstimate est = winding_area_estimate(loop, ks[i], 100000, rr, rng);
        ratio[i] = kPi * ks[i] * est.value;
        pass = pass && std::abs(ratio[i] - 1.0) <= 0.15;
    }
    CriterionResult res;
    res.pass = pass;
    res.detail = fmt("pi*k*area={%.4f,%.4f,%.4f} tol=0.15", ratio[0], ratio[1], ratio[2]);
    return res;
}

// 6. Abelian holonomy of one frozen loop converges to the wrapped Cauchy law
//    of scale 1/2 as the cloud intensity grows.
inline CriterionResult abelian_cauchy_limit(std::uint64_t seed) {
    Philox path_rng(seed + 600, 0);
    const PolyPath loop = close_loop(sample_brownian(100000, path_rng));
    const WindingIndex idx(loop, 1024);
    const double rho = max_radius(loop);
    const GroupKind t1 = GroupKind::torus(1);
    const double Ks[3] = {100.0, 300.0, 1000.0};
    double ks[3] = {0, 0, 0};
    for (int ki = 0; ki < 3; ++ki) {
        const double K = Ks[ki];
        std::vector<double> angles;
        angles.reserve(10000);
        for (int d = 0; d < 10000; ++d) {
            // Punctures beyond the loop's outer radius never wind: the cloud
            // is thinned to that disk without changing the holonomy law.
            Philox rng(seed + 600, 1 + static_cast<std::uint64_t>(ki) * 20000 +
                                       static_cast<std::uint64_t>(d));
            const long long n = poisson(rng, K * kPi * rho * rho);
            double sum = 0.0;
            for (long long i = 0; i < n; ++i) {
                for (;;) {
                    const auto xy = disk_point(rng, rho);
                    int w = 0;
                    if (idx.try_winding({xy[0], xy[1]}, w)) {
                        if (w != 0) sum += w * sphere_sample(t1, 1.0 / K, rng)[0];
                        break;
                    }
                }
            }
            angles.push_back(wrap_angle(sum));
        }
        ks[ki] =
            ks_distance(angles, [](double th) { return wrapped_cauchy_cdf(0.5, th); }).statistic;
    }
    CriterionResult res;
    res.pass = ks[0] > ks[1] && ks[1] > ks[2] && ks[2] < 0.05;
    res.detail = fmt("ks={%.4f,%.4f,%.4f} final_bound=0.05", ks[0], ks[1], ks[2]);
    return res;
}

// 7. Noncommutative holonomy matches the developed stable limit law, and the
//    ordered product of powered charges tracks the holonomy.
inline CriterionResult holonomy_stable_limit(std::uint64_t seed) {
    const GroupKind su2 = GroupKind::su2();
    const double K = 300.0;
    const int draws = 3000, nloop = 20000;
    std::vector<double> dh, ds;
    dh.reserve(draws);
    ds.reserve(draws);
    for (int d = 0; d < draws; ++d) {
        Philox rng(seed + 700, 1 + static_cast<std::uint64_t>(d));
        for (int attempt = 0;; ++attempt) {
            if (attempt > 200) throw DegeneracyError("holonomy_stable_limit: stuck draw");
            try {
                const PolyPath loop = close_loop(sample_brownian(nloop, rng));
                const double rho = max_radius(loop);
                const long long n = poisson(rng, K * kPi * rho * rho);
                std::vector<Point2> pts;
                pts.reserve(static_cast<std::size_t>(n));
                for (long long i = 0; i < n; ++i) {
                    const auto xy = disk_point(rng, rho);
                    pts.push_back({xy[0], xy[1]});
                }
                const PunctureSet ps = make_puncture_set(std::move(pts));
                std::vector<ChargedPuncture> charges(ps.size());
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    charges[i].point = ps.points[i];
                    charges[i].Z = sphere_sample(su2, 1.0 / K, rng);
                    charges[i].g = exp_g(su2, charges[i].Z);
                    charges[i].id = static_cast<std::int32_t>(i) + 1;
                }
                const Word w = word_of_loop(loop, RayIndex(ps));
                std::vector<std::int64_t> th(ps.size(), 0);
                for (const Letter l : w.letters)
                    th[static_cast<std::size_t>(std::abs(l)) - 1] += l > 0 ? 1 : -1;
                dh.push_back(class_coordinate(su2, holonomy_eval(su2, w, charges)).front());
                ds.push_back(class_coordinate(su2, simpler_product(su2, charges, th)).front());
                break;
            } catch (const DegeneracyError&) {
            }
        }
    }
    std::vector<double> dn;
    dn.reserve(draws);
    for (int d = 0; d < draws; ++d) {
        Philox rng(seed + 700, 100000 + static_cast<std::uint64_t>(d));
        dn.push_back(class_coordinate(su2, nu_star_sample(su2, 4096, rng)).front());
    }
    const double ks1 = ks_distance(dh, dn).statistic;
    const double ks2 = ks_distance(dh, ds).statistic;
    CriterionResult res;
    res.pass = ks1 < 0.1 && ks2 < 0.05;
    res.detail = fmt("ks_limit=%.4f bound=0.1 ks_product=%.4f bound=0.05", ks1, ks2);
    return res;
}

// 8. Braid actions leave tuples of conjugation-invariant laws invariant; a
//    law pinned to distinct axes is detected.
inline CriterionResult braid_invariance(std::uint64_t seed) {
    const GroupKind su2 = GroupKind::su2();
    Philox gen(seed + 800, 0);
    const auto good_law = [&su2](int slot, Philox& r) {
        return exp_g(su2, sphere_sample(su2, 0.25 + 0.05 * slot, r));
    };
    bool all_pass = true;
    for (int b = 0; b < 5; ++b) {
        const int strands = 2 + static_cast<int>(gen.next_u64() % 5);
        const int len = 1 + static_cast<int>(gen.next_u64() % 10);
        const BraidWord braid = random_braid(gen, strands, len);
        Philox rng(seed + 800, 1 + static_cast<std::uint64_t>(b));
        const InvarianceReport rep = invariance_test(su2, good_law, braid, 100000, rng);
        all_pass = all_pass && rep.pass;
    }
    const auto bad_law = [&su2](int slot, Philox& r) {
        AlgebraVec axis(3, 0.0);
        axis[static_cast<std::size_t>(slot % 3)] = 0.8;
        return mul(su2, exp_g(su2, axis), exp_g(su2, sphere_sample(su2, 0.05, r)));
    };
    Philox rng(seed + 800, 100);
    const InvarianceReport neg = invariance_test(su2, bad_law, make_braid(3, {1}), 100000, rng);
    CriterionResult res;
    res.pass = all_pass && !neg.pass;
    res.detail = fmt("braids=5 all_invariant=%d control_rejected=%d", all_pass ? 1 : 0,
                     neg.pass ? 0 : 1);
    return res;
}

// 9. The gap between the product of exponentials and the exponential of the
//    sum scales as the square of the total algebra mass.
inline CriterionResult bch_gap_scaling(std::uint64_t seed) {
    const GroupKind su2 = GroupKind::su2();
    Philox rng(seed + 900, 0);
    const double ts[3] = {0.5, 0.25, 0.125};
    const int reps = 200, m = 16;
    double mean_gap[3] = {0, 0, 0};
    std::vector<AlgebraVec> dirs(m), xs(m);
    for (int rep = 0; rep < reps; ++rep) {
        for (int i = 0; i < m; ++i) dirs[static_cast<std::size_t>(i)] = sphere_sample(su2, 1.0, rng);
        for (int ti = 0; ti < 3; ++ti) {
            for (int i = 0; i < m; ++i)
                xs[static_cast<std::size_t>(i)] =
                    algebra_scale(ts[ti] / m, dirs[static_cast<std::size_t>(i)]);
            mean_gap[ti] += prod_vs_sum_gap(su2, xs);
        }
    }
    double ratio[3];
    for (int ti = 0; ti < 3; ++ti) ratio[ti] = mean_gap[ti] / reps / (ts[ti] * ts[ti]);
    const double hi = std::max({ratio[0], ratio[1], ratio[2]});
    const double lo = std::min({ratio[0], ratio[1], ratio[2]});
    CriterionResult res;
    res.pass = (hi - lo) / lo < 0.2;
    res.detail =
        fmt("gap/t2={%.5f,%.5f,%.5f} spread=%.4f bound=0.2", ratio[0], ratio[1], ratio[2],
            (hi - lo) / lo);
    return res;
}

// 10. Radial sampler matches its quadrature law; the radial transport pushes
//     it to the half-Cauchy law; the transport stays near the identity.
inline CriterionResult radial_transport_laws(std::uint64_t seed) {
    const int dims[2] = {1, 3};
    double rks[2], pks[2], dev[2];
    bool pass = true;
    for (int j = 0; j < 2; ++j) {
        const int d = dims[j];
        Philox rng(seed + 1000, static_cast<std::uint64_t>(j));
        const StableParams unit{d, 1.0};
        std::vector<double> rs;
        rs.reserve(100000);
        for (int i = 0; i < 100000; ++i) rs.push_back(algebra_norm(nu_sigma_sample(unit, rng)));
        rks[j] = ks_distance(rs, [d](double r) { return radial_cdf(d, r); }).statistic;

        const StableParams tp{d, transport_sigma(d)};
        const RadialTransport tr(d);
        std::vector<double> ys;
        ys.reserve(100000);
        for (int i = 0; i < 100000; ++i)
            ys.push_back(tr.psi(algebra_norm(nu_sigma_sample(tp, rng))));
        pks[j] =
            ks_distance(ys, [](double y) { return (2.0 / kLgPi) * std::atan(y); }).statistic;

        double mx = 0.0;
        for (int i = 0; i <= 2000; ++i)
            mx = std::max(mx, std::abs(psi_transport(d, 0.5 * i) - 0.5 * i));
        dev[j] = mx;
        pass = pass && rks[j] < 0.01 && pks[j] < 0.02 && std::isfinite(dev[j]);
    }
    CriterionResult res;
    res.pass = pass;
    res.detail = fmt("radial_ks={%.5f,%.5f} push_ks={%.5f,%.5f} max_psi_dev={%.4f,%.4f}", rks[0],
                     rks[1], pks[0], pks[1], dev[0], dev[1]);
    return res;
}

// 11. The holonomy law of a loop is invariant under an area-preserving shear
//     of the plane, and not under a dilation.
inline CriterionResult shear_invariance(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.kind = GroupKind::torus(1);
    cfg.K = 50.0;
    cfg.R = 2.0;
    cfg.n_steps = 500;
    cfg.seed = seed + 1100;
    Philox path_rng(seed + 1100, 999);
    PolyPath loop = close_loop(sample_brownian(500, path_rng));
    const double f = 0.9 / max_radius(loop);
    for (Point2& v : loop.vertices) v = f * v;

    const DiffeoReport shear = diffeo_check(cfg, 0.7, loop, 10000);
    const DiffeoReport blown = diffeo_compare(
        cfg, loop, [](Point2 p) { return Point2{2.0 * p.x, 2.0 * p.y}; }, 10000);
    double min_p = 1.0;
    for (const TestReport& t : shear.checks) min_p = std::min(min_p, t.p_value);
    CriterionResult res;
    res.pass = shear.pass && !blown.pass;
    res.detail = fmt("shear_min_p=%.4f dilation_rejected=%d", min_p, blown.pass ? 0 : 1);
    return res;
}

// 12. The chance that the cloud's minimal spacing (punctures and origin)
//     drops below 1/(K log K) shrinks as K grows.
inline CriterionResult cloud_spacing(std::uint64_t seed) {
    const double R = 0.5;
    const int draws = 30000;
    const double Ks[2] = {100.0, 1000.0};
    double p[2] = {0, 0};
    for (int ki = 0; ki < 2; ++ki) {
        const double K = Ks[ki];
        const double thr = 1.0 / (K * std::log(K));
        const double thr2 = thr * thr;
        long long bad = 0;
        std::vector<Point2> pts;
        for (int d = 0; d < draws; ++d) {
            Philox rng(seed + 1200, 1 + static_cast<std::uint64_t>(ki) * 100000 +
                                        static_cast<std::uint64_t>(d));
            const long long n = poisson(rng, K * kPi * R * R);
            pts.clear();
            bool hit = false;
            for (long long i = 0; i < n; ++i) {
                const auto xy = disk_point(rng, R);
                const Point2 q{xy[0], xy[1]};
                if (norm2(q) <= thr2) hit = true;
                pts.push_back(q);
            }
            if (!hit) {
                std::sort(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a.x < b.x; });
                for (std::size_t i = 0; i < pts.size() && !hit; ++i)
                    for (std::size_t k = i + 1;
                         k < pts.size() && pts[k].x - pts[i].x < thr; ++k)
                        if (norm2(pts[k] - pts[i]) <= thr2) {
                            hit = true;
                            break;
                        }
            }
            if (hit) ++bad;
        }
        p[ki] = static_cast<double>(bad) / draws;
    }
    CriterionResult res;
    res.pass = p[0] > p[1] && p[1] <= 0.1;
    res.detail = fmt("p_k100=%.4f p_k1000=%.4f bound=0.1", p[0], p[1]);
    return res;
}

}  // namespace verify_detail

// Runs the twelve checks in order.  progress, when set, receives one line per
// check including wall time (not deterministic); the returned results carry
// the deterministic fields.
inline std::vector<CriterionResult> run_verification(std::uint64_t seed,
                                                     std::ostream* progress = nullptr) {
    using Fn = CriterionResult (*)(std::uint64_t);
    const std::pair<const char*, Fn> checks[] = {
        {"word-winding-identity", &verify_detail::word_winding_identity},
        {"decomposition-reconstruction", &verify_detail::decomposition_reconstruction},
        {"refinement-chain", &verify_detail::refinement_chain},
        {"halfturn-l1-bound", &verify_detail::halfturn_l1_bound},
        {"winding-area-constant", &verify_detail::winding_area_constant},
        {"abelian-cauchy-limit", &verify_detail::abelian_cauchy_limit},
        {"holonomy-stable-limit", &verify_detail::holonomy_stable_limit},
        {"braid-invariance", &verify_detail::braid_invariance},
        {"bch-gap-scaling", &verify_detail::bch_gap_scaling},
        {"radial-transport-laws", &verify_detail::radial_transport_laws},
        {"shear-invariance", &verify_detail::shear_invariance},
        {"cloud-spacing", &verify_detail::cloud_spacing},
    };
    std::vector<CriterionResult> out;
    int idx = 0;
    for (const auto& [name, fn] : checks) {
        ++idx;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = fn(seed);
        r.index = idx;
        r.name = name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (progress)
            (*progress) << (r.pass ? "[PASS] " : "[FAIL] ") << r.index << "/12 " << r.name << "  "
                        << r.detail << "  (" << verify_detail::fmt("%.1f", r.seconds) << "s)"
                        << std::endl;
        out.push_back(std::move(r));
    }
    return out;
}

inline bool verification_passed(const std::vector<CriterionResult>& rs) {
    for (const CriterionResult& r : rs)
        if (!r.pass) return false;
    return !rs.empty();
}

// Deterministic report: identical for identical seeds.
inline void print_verification(std::ostream& os, const std::vector<CriterionResult>& rs) {
    for (const CriterionResult& r : rs)
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.index << "/12 " << r.name << "  " << r.detail
           << "\n";
    os << (verification_passed(rs) ? "VERIFICATION PASSED" : "VERIFICATION FAILED") << " ("
       << rs.size() << " checks)\n";
}

}  // namespace looplab
