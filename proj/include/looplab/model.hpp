#pragma once
// End-to-end experiments on random flat connections: Poisson clouds of
// charged punctures, Brownian loops, homotopy words, holonomy and the
// ordered charge product, per-puncture winding statistics, and the
// invariance diagnostics (volume-preserving maps, half-turn tails).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "looplab/freegroup.hpp"
#include "looplab/geometry.hpp"
#include "looplab/harness.hpp"
#include "looplab/homotopy.hpp"
#include "looplab/liegroup.hpp"
#include "looplab/rng.hpp"

namespace looplab {

// --- Configuration --------------------------------------------------------

enum class SimMode { Quenched, Annealed };

inline std::string to_string(SimMode m) {
    return m == SimMode::Quenched ? "quenched" : "annealed";
}

inline SimMode sim_mode_from_string(const std::string& s) {
    if (s == "quenched") return SimMode::Quenched;
    if (s == "annealed") return SimMode::Annealed;
    throw std::invalid_argument("ModelConfig: mode must be \"quenched\" or \"annealed\"");
}

struct ModelConfig {
    GroupKind kind = GroupKind::torus(1);
    double K = 100.0;       // cloud intensity; charges have norm 1/K
    double R = 4.0;         // window radius
    int n_steps = 1000;     // path discretization steps
    int replicas = 100;
    std::uint64_t seed = 1;
    double epsilon = 0.04;  // class-threshold exponent offset, in (0, 1/20)
    SimMode mode = SimMode::Annealed;

    void validate() const {
        if (!(K > 0.0)) throw std::invalid_argument("ModelConfig: K must be positive");
        if (!(R > 0.0)) throw std::invalid_argument("ModelConfig: R must be positive");
        if (n_steps < 1) throw std::invalid_argument("ModelConfig: n_steps must be >= 1");
        if (replicas < 1) throw std::invalid_argument("ModelConfig: replicas must be >= 1");
        if (!(epsilon > 0.0 && epsilon < 0.05))
            throw std::invalid_argument("ModelConfig: epsilon must lie in (0, 1/20)");
    }
};

inline std::string group_name(const GroupKind& kind) {
    switch (kind.tag) {
        case GroupTag::Torus: return "torus";
        case GroupTag::SU2: return "su2";
        default: return "so3";
    }
}

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["group"] = group_name(cfg.kind);
    if (cfg.kind.tag == GroupTag::Torus) j["dim"] = cfg.kind.dim;
    j["K"] = cfg.K;
    j["R"] = cfg.R;
    j["n_steps"] = cfg.n_steps;
    j["replicas"] = cfg.replicas;
    j["seed"] = cfg.seed;
    j["epsilon"] = cfg.epsilon;
    j["mode"] = to_string(cfg.mode);
    return j;
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    if (j.contains("group")) {
        const std::string name = j.at("group").get<std::string>();
        if (name == "torus")
            cfg.kind = GroupKind::torus(j.value("dim", 1));
        else if (name == "su2")
            cfg.kind = GroupKind::su2();
        else if (name == "so3")
            cfg.kind = GroupKind::so3();
        else
            throw std::invalid_argument("ModelConfig: unknown group \"" + name + "\"");
    }
    cfg.K = j.value("K", cfg.K);
    cfg.R = j.value("R", cfg.R);
    cfg.n_steps = j.value("n_steps", cfg.n_steps);
    cfg.replicas = j.value("replicas", cfg.replicas);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    if (j.contains("mode")) cfg.mode = sim_mode_from_string(j.at("mode").get<std::string>());
    cfg.validate();
    return cfg;
}

// --- Punctures and charges ------------------------------------------------

struct ChargedPuncture {
    Point2 point{};
    AlgebraVec Z;        // ||Z|| = 1/K
    GroupElem g;         // exp(Z)
    std::int32_t id = 0; // matches the norm-ordered PunctureSet id
};

struct PunctureSample {
    PunctureSet ps;
    std::vector<ChargedPuncture> charges;  // aligned with ps.points
    int resamples = 0;                     // degenerate position sets redrawn
};

inline PunctureSample sample_punctures(const ModelConfig& cfg, Philox& rng) {
    cfg.validate();
    PunctureSample out;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 1000)
            throw DegeneracyError("sample_punctures: could not draw a non-degenerate set");
        const long long n = poisson(rng, cfg.K * kPi * cfg.R * cfg.R);
        std::vector<Point2> pts;
        pts.reserve(static_cast<std::size_t>(n));
        for (long long i = 0; i < n; ++i) {
            const auto xy = disk_point(rng, cfg.R);
            pts.push_back({xy[0], xy[1]});
        }
        try {
            out.ps = make_puncture_set(std::move(pts));
        } catch (const DegeneracyError&) {
            ++out.resamples;
            continue;
        }
        break;
    }
    const double radius = 1.0 / cfg.K;
    out.charges.reserve(out.ps.size());
    for (std::size_t i = 0; i < out.ps.size(); ++i) {
        ChargedPuncture cp;
        cp.point = out.ps.points[i];
        cp.Z = sphere_sample(cfg.kind, radius, rng);
        cp.g = exp_g(cfg.kind, cp.Z);
        cp.id = static_cast<std::int32_t>(i) + 1;
        out.charges.push_back(std::move(cp));
    }
    return out;
}

// --- Brownian discretization ----------------------------------------------

inline PolyPath sample_brownian(int n, Philox& rng) {
    if (n < 1) throw std::invalid_argument("sample_brownian: need n >= 1");
    PolyPath p;
    p.vertices.resize(static_cast<std::size_t>(n) + 1);
    p.times.resize(static_cast<std::size_t>(n) + 1);
    p.vertices[0] = {0.0, 0.0};
    p.times[0] = 0.0;
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    double x = 0.0, y = 0.0;
    for (int j = 1; j <= n; ++j) {
        x += s * normal01(rng);
        y += s * normal01(rng);
        p.vertices[static_cast<std::size_t>(j)] = {x, y};
        p.times[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
    }
    p.closed = false;
    return p;
}

// --- Holonomy and the ordered charge product ------------------------------

inline GroupElem holonomy_eval(const GroupKind& kind, const Word& word,
                               const std::vector<ChargedPuncture>& charges) {
    GroupElem h = identity(kind);
    for (const Letter l : word.letters) {
        const std::size_t i = static_cast<std::size_t>(std::abs(l)) - 1;
        if (i >= charges.size() || charges[i].id != std::abs(l))
            throw std::out_of_range("holonomy_eval: unknown puncture id");
        h = mul(kind, h, l > 0 ? charges[i].g : inverse(kind, charges[i].g));
    }
    return h;
}

// prod_x g_x^{theta(x)} with the factors taken in charge (norm) order.
inline GroupElem simpler_product(const GroupKind& kind,
                                 const std::vector<ChargedPuncture>& charges,
                                 const std::vector<std::int64_t>& windings) {
    if (windings.size() != charges.size())
        throw std::invalid_argument("simpler_product: windings/charges length mismatch");
    GroupElem h = identity(kind);
    for (std::size_t i = 0; i < charges.size(); ++i) {
        if (windings[i] == 0) continue;
        h = mul(kind, h,
                exp_g(kind, algebra_scale(static_cast<double>(windings[i]), charges[i].Z)));
    }
    return h;
}

// Same product with an explicit factor order (a permutation of indices into
// charges); the order must be chosen independently of the charges.
inline GroupElem simpler_product(const GroupKind& kind,
                                 const std::vector<ChargedPuncture>& charges,
                                 const std::vector<std::int64_t>& windings,
                                 const std::vector<std::size_t>& order) {
    if (windings.size() != charges.size() || order.size() != charges.size())
        throw std::invalid_argument("simpler_product: order/windings/charges length mismatch");
    GroupElem h = identity(kind);
    for (const std::size_t i : order) {
        if (windings.at(i) == 0) continue;
        h = mul(kind, h,
                exp_g(kind, algebra_scale(static_cast<double>(windings[i]), charges[i].Z)));
    }
    return h;
}

// --- Batch half-turn counts -----------------------------------------------
//
// Same alternating-hit automaton as half_turn_count, restructured for many
// query points against one (long) path: per point the line offsets f_k are
// buffered with one fused pass, then scanned chunk-wise; a chunk is replayed
// edge by edge only when it can contain a hit (some |f| <= kTol or a sign
// change).  Points beyond the path's outer radius never meet their reference
// line, so they are resolved without a scan.  Results, including the
// DegeneracyError cases, match half_turn_count exactly.

inline std::vector<int> batch_half_turns(const PolyPath& path, const std::vector<Point2>& pts) {
    const std::size_t nv = path.vertices.size();
    if (nv < 2) throw std::invalid_argument("batch_half_turns: need at least 2 vertices");
    const double max_r = max_radius(path);
    // A point with r - max_r above this slack has f = dot(q,u) - r < -kTol on
    // every vertex, even accounting for the rounding of dot and of u.
    const double far_slack = 2.0 * kTol + 16.0 * std::numeric_limits<double>::epsilon() * max_r;

    std::vector<double> vx(nv), vy(nv), buf(nv);
    for (std::size_t k = 0; k < nv; ++k) {
        vx[k] = path.vertices[k].x;
        vy[k] = path.vertices[k].y;
    }

    constexpr std::size_t kChunk = 256;
    std::vector<int> out(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const Point2 p = pts[j];
        const double r = norm(p);
        if (r <= kTol) throw std::invalid_argument("half_turn_count: p at origin");
        if (r - max_r > far_slack) {
            out[j] = 1;
            continue;
        }
        const double ux = p.x / r, uy = p.y / r;
        const Point2 w{-uy, ux};
        for (std::size_t k = 0; k < nv; ++k) buf[k] = vx[k] * ux + vy[k] * uy - r;

        int hits = 0;
        int want = +1;
        const auto on_line_hit = [&](Point2 q) {
            const double s = dot(q, w);
            if (std::abs(s) <= kTol) throw DegeneracyError("half_turn_count: path at p");
            if ((s > 0.0 ? +1 : -1) == want) {
                ++hits;
                want = -want;
            }
        };

        if (std::abs(buf[0]) <= kTol) on_line_hit(path.vertices[0]);
        std::size_t i = 0;
        while (i + 1 < nv) {
            const std::size_t b = std::min(i + kChunk, nv - 1);
            double min_abs = std::numeric_limits<double>::infinity();
            double min_prod = std::numeric_limits<double>::infinity();
            for (std::size_t k = i; k < b; ++k) {
                min_abs = std::min(min_abs, std::abs(buf[k + 1]));
                min_prod = std::min(min_prod, buf[k] * buf[k + 1]);
            }
            if (min_abs > kTol && min_prod >= 0.0) {
                i = b;
                continue;
            }
            for (std::size_t k = i; k < b; ++k) {
                const bool a_on = std::abs(buf[k]) <= kTol;
                const bool b_on = std::abs(buf[k + 1]) <= kTol;
                if (a_on && b_on)
                    throw DegeneracyError("half_turn_count: segment along the reference line");
                if (!a_on && !b_on && buf[k] * buf[k + 1] < 0.0) {
                    const double lam = buf[k] / (buf[k] - buf[k + 1]);
                    on_line_hit(path.vertices[k] + lam * (path.vertices[k + 1] - path.vertices[k]));
                }
                if (b_on) on_line_hit(path.vertices[k + 1]);
            }
            i = b;
        }
        out[j] = hits + 1;
    }
    return out;
}

// --- Per-puncture word statistics -----------------------------------------

struct PunctureStats {
    std::int32_t id = 0;
    Point2 point{};
    std::int64_t theta = 0;       // winding number of the loop
    std::int64_t theta_half = 0;  // half-turn count of the loop
    std::int64_t beta1 = 0;       // largest |.| entry of alpha (signed)
    std::int64_t beta2 = 0;       // second largest (signed)
    std::int64_t S2 = 0;          // sum |alpha| minus the largest
    std::int64_t S5 = 0;          // sum |alpha| minus the four largest
    int cls = 3;                  // 0..3
    std::vector<std::int64_t> alpha;  // exponent sequence of pi^{<=x}(word)
};

namespace detail {

// Class thresholds: 0 when |beta1| > K^(2/3); 1 when |beta1| > K^(1/2-eps);
// 2 when additionally S2 >= K^(1/2-eps); else 3.
inline int puncture_class(std::int64_t beta1, std::int64_t S2, double thr_mid, double thr_top) {
    const double b = std::abs(static_cast<double>(beta1));
    if (b > thr_top) return 0;
    if (b > thr_mid) return 1;
    if (static_cast<double>(S2) >= thr_mid) return 2;
    return 3;
}

}  // namespace detail

// Builds the full per-puncture table for the word of a closed loop: winding
// number, half-turn count, the exponent sequence alpha of pi^{<=x}(word) with
// its order statistics, and the class.  Punctures absent from the word get an
// all-zero row with class 3.  An already-built WindingIndex over the same
// loop can be supplied; half-turn computation can be skipped when only the
// algebraic columns are needed.
inline std::vector<PunctureStats> word_statistics(const Word& word, const PunctureSet& ps,
                                                  const PolyPath& loop, double K,
                                                  double epsilon = 0.04,
                                                  const WindingIndex* index = nullptr,
                                                  bool with_half_turns = true) {
    if (!loop.closed) throw std::invalid_argument("word_statistics: loop must be closed");
    if (!(K > 0.0)) throw std::invalid_argument("word_statistics: K must be positive");
    const std::size_t m = ps.size();

    std::vector<std::uint8_t> occurs(m + 1, 0);
    for (const Letter l : word.letters) {
        const std::size_t id = static_cast<std::size_t>(std::abs(l));
        if (id == 0 || id > m) throw std::out_of_range("word_statistics: unknown puncture id");
        occurs[id] = 1;
    }

    CascadeResult cas = all_alpha_leq(word);
    std::vector<std::vector<std::int64_t>> alpha(m + 1);
    for (std::size_t k = 0; k < cas.ids.size(); ++k)
        alpha[static_cast<std::size_t>(cas.ids[k])] = std::move(cas.alpha_leq[k]);

    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < m; ++i)
        if (occurs[i + 1]) support.push_back(i);

    const double thr_top = std::pow(K, 2.0 / 3.0);
    const double thr_mid = std::pow(K, 0.5 - epsilon);
    std::vector<PunctureStats> rows(m);
    for (std::size_t i = 0; i < m; ++i) {
        PunctureStats& st = rows[i];
        st.id = static_cast<std::int32_t>(i) + 1;
        st.point = ps.points[i];
        if (!occurs[i + 1]) continue;
        st.alpha = std::move(alpha[i + 1]);
        const auto beta = beta_sorted(st.alpha);
        st.beta1 = beta.empty() ? 0 : beta[0];
        st.beta2 = beta.size() < 2 ? 0 : beta[1];
        st.S2 = tail_sum(beta, 2);
        st.S5 = tail_sum(beta, 5);
        st.cls = detail::puncture_class(st.beta1, st.S2, thr_mid, thr_top);
    }

    if (!support.empty()) {
        std::optional<WindingIndex> local;
        if (!index) {
            local.emplace(loop);
            index = &*local;
        }
        for (const std::size_t i : support)
            rows[i].theta = index->winding(ps.points[i]);
        if (with_half_turns) {
            std::vector<Point2> spts;
            spts.reserve(support.size());
            for (const std::size_t i : support) spts.push_back(ps.points[i]);
            const std::vector<int> th = batch_half_turns(loop, spts);
            for (std::size_t k = 0; k < support.size(); ++k)
                rows[support[k]].theta_half = th[k];
        }
    }
    return rows;
}

// --- Experiment driver ----------------------------------------------------

struct ReplicaReport {
    int replica = 0;
    std::uint64_t draw_stream = 0;  // punctures/charges (and path when annealed)
    std::uint64_t path_stream = 0;
    GroupElem holonomy;  // holonomy of the loop's word
    GroupElem simpler;   // norm-ordered product of g_x^{theta(x)}
    std::vector<double> holonomy_class;
    std::vector<double> simpler_class;
    Word word;
    std::vector<PunctureStats> table;
    double delta = 0.0;  // minimal spacing of the puncture set
    std::int64_t n_punctures = 0;
    bool flag_E = false;  // #P <= 4 R K log K  and  delta >= 1/(K log K)
    bool flag_F = false;  // path stays inside the window
    int resamples = 0;    // degenerate draws redrawn for this replica
};

struct SimReport {
    ModelConfig config;
    std::vector<ReplicaReport> replicas;
    double mean_punctures = 0.0;
    double freq_E = 0.0;
    double freq_F = 0.0;
    long long total_resamples = 0;
};

enum class StatsLevel {
    None,      // holonomy, product and diagnostics only
    Windings,  // adds the per-puncture table without half-turn counts
    Full       // the complete table
};

struct RunOptions {
    StatsLevel stats = StatsLevel::Full;
    bool store_replicas = true;
    std::function<void(const ReplicaReport&)> on_replica;
};

inline SimReport run_experiment(const ModelConfig& cfg, const RunOptions& opt = {}) {
    cfg.validate();
    SimReport rep;
    rep.config = cfg;

    PolyPath frozen_loop;
    std::optional<WindingIndex> frozen_index;
    if (cfg.mode == SimMode::Quenched) {
        Philox prng(cfg.seed, 0);
        frozen_loop = close_loop(sample_brownian(cfg.n_steps, prng));
        if (opt.stats != StatsLevel::None) frozen_index.emplace(frozen_loop);
    }

    const double lk = std::log(cfg.K);
    double sum_p = 0.0, sum_e = 0.0, sum_f = 0.0;
    if (opt.store_replicas) rep.replicas.reserve(static_cast<std::size_t>(cfg.replicas));
    for (int r = 0; r < cfg.replicas; ++r) {
        Philox rng(cfg.seed, 1 + static_cast<std::uint64_t>(r));
        ReplicaReport rr;
        rr.replica = r;
        rr.draw_stream = 1 + static_cast<std::uint64_t>(r);
        rr.path_stream = cfg.mode == SimMode::Quenched ? 0 : rr.draw_stream;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 200)
                throw DegeneracyError("run_experiment: replica keeps degenerating");
            try {
                PunctureSample cloud = sample_punctures(cfg, rng);
                rr.resamples += cloud.resamples;
                PolyPath local_loop;
                const PolyPath* loop = &frozen_loop;
                if (cfg.mode == SimMode::Annealed) {
                    local_loop = close_loop(sample_brownian(cfg.n_steps, rng));
                    loop = &local_loop;
                }
                const RayIndex rays(cloud.ps);
                Word word = word_of_loop(*loop, rays);

                std::vector<std::int64_t> theta(cloud.charges.size(), 0);
                for (const Letter l : word.letters) {
                    const std::size_t i = static_cast<std::size_t>(std::abs(l)) - 1;
                    theta[i] += l > 0 ? 1 : -1;
                }
                rr.holonomy = holonomy_eval(cfg.kind, word, cloud.charges);
                rr.simpler = simpler_product(cfg.kind, cloud.charges, theta);
                rr.holonomy_class = class_coordinate(cfg.kind, rr.holonomy);
                rr.simpler_class = class_coordinate(cfg.kind, rr.simpler);
                if (opt.stats != StatsLevel::None) {
                    const WindingIndex* idx =
                        cfg.mode == SimMode::Quenched ? &*frozen_index : nullptr;
                    rr.table = word_statistics(word, cloud.ps, *loop, cfg.K, cfg.epsilon, idx,
                                               opt.stats == StatsLevel::Full);
                }
                rr.word = std::move(word);
                rr.delta = cloud.ps.points.empty() ? std::numeric_limits<double>::infinity()
                                                   : min_spacing(cloud.ps);
                rr.n_punctures = static_cast<std::int64_t>(cloud.ps.size());
                rr.flag_E = lk <= 0.0 ||
                            (static_cast<double>(rr.n_punctures) <= 4.0 * cfg.R * cfg.K * lk &&
                             rr.delta >= 1.0 / (cfg.K * lk));
                rr.flag_F = max_radius(*loop) <= cfg.R;
                break;
            } catch (const DegeneracyError&) {
                rr.word = Word{};
                rr.table.clear();
                ++rr.resamples;
            }
        }
        sum_p += static_cast<double>(rr.n_punctures);
        sum_e += rr.flag_E ? 1.0 : 0.0;
        sum_f += rr.flag_F ? 1.0 : 0.0;
        rep.total_resamples += rr.resamples;
        if (opt.on_replica) opt.on_replica(rr);
        if (opt.store_replicas) rep.replicas.push_back(std::move(rr));
    }
    const double n = static_cast<double>(cfg.replicas);
    rep.mean_punctures = sum_p / n;
    rep.freq_E = sum_e / n;
    rep.freq_F = sum_f / n;
    return rep;
}

// --- Report serialization -------------------------------------------------

inline nlohmann::json report_to_json(const SimReport& rep) {
    nlohmann::json j;
    j["config"] = config_to_json(rep.config);
    j["mean_punctures"] = rep.mean_punctures;
    j["freq_E"] = rep.freq_E;
    j["freq_F"] = rep.freq_F;
    j["total_resamples"] = rep.total_resamples;
    nlohmann::json rs = nlohmann::json::array();
    for (const ReplicaReport& rr : rep.replicas) {
        nlohmann::json r;
        r["replica"] = rr.replica;
        r["draw_stream"] = rr.draw_stream;
        r["path_stream"] = rr.path_stream;
        r["holonomy_class"] = rr.holonomy_class;
        r["simpler_class"] = rr.simpler_class;
        r["word_length"] = rr.word.size();
        r["delta"] = rr.delta;
        r["n_punctures"] = rr.n_punctures;
        r["flag_E"] = rr.flag_E;
        r["flag_F"] = rr.flag_F;
        r["resamples"] = rr.resamples;
        rs.push_back(std::move(r));
    }
    j["replicas"] = std::move(rs);
    return j;
}

// CSV table of one replica's per-puncture statistics.
inline void windings_csv(std::ostream& os, const std::vector<PunctureStats>& table) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(table.size());
    for (const PunctureStats& st : table)
        rows.push_back({std::to_string(st.id), csv_num(st.point.x), csv_num(st.point.y),
                        std::to_string(st.theta), std::to_string(st.theta_half),
                        std::to_string(st.beta1), std::to_string(st.beta2),
                        std::to_string(st.S2), std::to_string(st.S5), std::to_string(st.cls)});
    write_csv(os,
              {"puncture_id", "x", "y", "theta", "theta_half", "beta1", "beta2", "S2", "S5",
               "class"},
              rows);
}

// CSV table of the per-replica class coordinates; flags is a bitmask with
// bit 0 for the cloud-size/spacing event and bit 1 for the window event.
inline void holonomy_csv(std::ostream& os, const SimReport& rep) {
    const std::size_t cdim = rep.replicas.empty() ? 1 : rep.replicas.front().holonomy_class.size();
    std::vector<std::string> header{"replica"};
    for (std::size_t c = 0; c < cdim; ++c) header.push_back("class_coord_" + std::to_string(c));
    for (std::size_t c = 0; c < cdim; ++c)
        header.push_back("simpler_class_coord_" + std::to_string(c));
    header.push_back("flags");
    std::vector<std::vector<std::string>> rows;
    rows.reserve(rep.replicas.size());
    for (const ReplicaReport& rr : rep.replicas) {
        std::vector<std::string> row{std::to_string(rr.replica)};
        for (const double v : rr.holonomy_class) row.push_back(csv_num(v));
        for (const double v : rr.simpler_class) row.push_back(csv_num(v));
        row.push_back(std::to_string((rr.flag_E ? 1 : 0) | (rr.flag_F ? 2 : 0)));
        rows.push_back(std::move(row));
    }
    write_csv(os, header, rows);
}

// --- Volume-preserving map diagnostic -------------------------------------

struct DiffeoReport {
    std::vector<TestReport> checks;  // one two-sample test per class coordinate
    double alpha = 0.01;
    bool pass = true;
    int draws = 0;
};

// Compares the law of the holonomy of a fixed loop with the law of the
// holonomy of its image under a map, over fresh puncture draws shared by the
// two sides.  The window must contain both loops so that every puncture that
// can wind around either is present.
inline DiffeoReport diffeo_compare(const ModelConfig& cfg, const PolyPath& loop,
                                   const std::function<Point2(Point2)>& map, int draws,
                                   double alpha = 0.01) {
    cfg.validate();
    if (!loop.closed) throw std::invalid_argument("diffeo_compare: loop must be closed");
    if (draws < 1) throw std::invalid_argument("diffeo_compare: need draws >= 1");
    PolyPath mapped = loop;
    for (Point2& v : mapped.vertices) v = map(v);
    mapped.validate();
    if (max_radius(loop) > cfg.R || max_radius(mapped) > cfg.R)
        throw std::invalid_argument("diffeo_compare: window must contain both loops");

    const bool torus = cfg.kind.tag == GroupTag::Torus;
    std::optional<WindingIndex> ia, ib;
    double ra = 0.0, rb = 0.0;
    if (torus) {
        ia.emplace(loop);
        ib.emplace(mapped);
        ra = max_radius(loop);
        rb = max_radius(mapped);
    }
    const std::size_t cdim = class_coordinate(cfg.kind, identity(cfg.kind)).size();
    std::vector<std::vector<double>> a(cdim), b(cdim);
    for (std::size_t c = 0; c < cdim; ++c) {
        a[c].reserve(static_cast<std::size_t>(draws));
        b[c].reserve(static_cast<std::size_t>(draws));
    }

    for (int d = 0; d < draws; ++d) {
        Philox rng(cfg.seed, 1 + static_cast<std::uint64_t>(d));
        for (int attempt = 0;; ++attempt) {
            if (attempt > 200) throw DegeneracyError("diffeo_compare: draw keeps degenerating");
            try {
                const PunctureSample cloud = sample_punctures(cfg, rng);
                GroupElem ha, hb;
                if (torus) {
                    AlgebraVec za(static_cast<std::size_t>(cfg.kind.dim), 0.0);
                    AlgebraVec zb = za;
                    for (std::size_t i = 0; i < cloud.ps.size(); ++i) {
                        const Point2 p = cloud.ps.points[i];
                        const double r = norm(p);
                        if (r <= ra + kTol)
                            if (const int w = ia->winding(p); w != 0)
                                za = algebra_add(za, algebra_scale(w, cloud.charges[i].Z));
                        if (r <= rb + kTol)
                            if (const int w = ib->winding(p); w != 0)
                                zb = algebra_add(zb, algebra_scale(w, cloud.charges[i].Z));
                    }
                    ha = exp_g(cfg.kind, za);
                    hb = exp_g(cfg.kind, zb);
                } else {
                    const RayIndex rays(cloud.ps);
                    ha = holonomy_eval(cfg.kind, word_of_loop(loop, rays), cloud.charges);
                    hb = holonomy_eval(cfg.kind, word_of_loop(mapped, rays), cloud.charges);
                }
                const auto ca = class_coordinate(cfg.kind, ha);
                const auto cb = class_coordinate(cfg.kind, hb);
                for (std::size_t c = 0; c < cdim; ++c) {
                    a[c].push_back(ca[c]);
                    b[c].push_back(cb[c]);
                }
                break;
            } catch (const DegeneracyError&) {
            }
        }
    }

    DiffeoReport out;
    out.alpha = alpha;
    out.draws = draws;
    for (std::size_t c = 0; c < cdim; ++c) {
        const KsResult ks = ks_distance(a[c], b[c]);
        out.checks.push_back(report_p_above("coord" + std::to_string(c), ks,
                                            alpha / static_cast<double>(cdim)));
        out.pass = out.pass && out.checks.back().pass;
    }
    return out;
}

// The shear (x, y) -> (x + c y, y), an area-preserving map.
inline DiffeoReport diffeo_check(const ModelConfig& cfg, double shear, const PolyPath& loop,
                                 int draws = 0, double alpha = 0.01) {
    const double c = shear;
    return diffeo_compare(
        cfg, loop, [c](Point2 p) { return Point2{p.x + c * p.y, p.y}; },
        draws > 0 ? draws : cfg.replicas, alpha);
}

// --- Half-turn versus winding tails ---------------------------------------

struct HalfturnTailReport {
    std::vector<std::int64_t> grid;  // N = k*k for k = 2..k_max
    std::vector<double> tail_half;   // P(theta_half >= N)
    std::vector<double> tail_theta;  // P(|theta| >= sqrt(N))
    std::vector<double> ratio;       // tail_half / tail_theta per grid point
    double sup_ratio = 0.0;
    long long coupling_violations = 0;  // draws with theta_half < 2|theta| - 2
    int draws = 0;
    long long point_redraws = 0;
};

// Estimates the two tails over (fresh Brownian loop, uniform point) draws.
inline HalfturnTailReport halfturn_tail_check(const ModelConfig& cfg, int draws = 0,
                                              double point_radius = 1.0, int k_max = 8) {
    cfg.validate();
    if (k_max < 2) throw std::invalid_argument("halfturn_tail_check: need k_max >= 2");
    const int nd = draws > 0 ? draws : cfg.replicas;
    HalfturnTailReport out;
    out.draws = nd;
    for (int k = 2; k <= k_max; ++k)
        out.grid.push_back(static_cast<std::int64_t>(k) * k);
    std::vector<long long> count_half(out.grid.size(), 0), count_theta(out.grid.size(), 0);

    for (int d = 0; d < nd; ++d) {
        Philox rng(cfg.seed, 1 + static_cast<std::uint64_t>(d));
        const PolyPath loop = close_loop(sample_brownian(cfg.n_steps, rng));
        int th_half = 0, th = 0;
        for (;;) {
            const auto xy = disk_point(rng, point_radius);
            const Point2 p{xy[0], xy[1]};
            if (norm(p) <= kTol) {
                ++out.point_redraws;
                continue;
            }
            try {
                th_half = half_turn_count(loop, p);
                th = winding_number(loop, p);
            } catch (const DegeneracyError&) {
                ++out.point_redraws;
                continue;
            }
            break;
        }
        if (th_half < 2 * std::abs(th) - 2) ++out.coupling_violations;
        for (std::size_t i = 0; i < out.grid.size(); ++i) {
            if (th_half >= out.grid[i]) ++count_half[i];
            if (std::abs(th) >= static_cast<int>(i) + 2) ++count_theta[i];
        }
    }

    const double n = static_cast<double>(nd);
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        out.tail_half.push_back(static_cast<double>(count_half[i]) / n);
        out.tail_theta.push_back(static_cast<double>(count_theta[i]) / n);
        double rt = 0.0;
        if (count_theta[i] > 0)
            rt = static_cast<double>(count_half[i]) / static_cast<double>(count_theta[i]);
        else if (count_half[i] > 0)
            rt = std::numeric_limits<double>::infinity();
        out.ratio.push_back(rt);
        out.sup_ratio = std::max(out.sup_ratio, rt);
    }
    return out;
}

}  // namespace looplab
