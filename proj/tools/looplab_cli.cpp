// Command-line front end: runs the simulation drivers and the verification
// suite, reading JSON configs and writing CSV/JSON artifacts.
//
// Exit codes: 0 = success, 1 = a statistical or verification check failed,
// 2 = usage or configuration error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "looplab/braid.hpp"
#include "looplab/freegroup.hpp"
#include "looplab/geometry.hpp"
#include "looplab/harness.hpp"
#include "looplab/homotopy.hpp"
#include "looplab/liegroup.hpp"
#include "looplab/model.hpp"
#include "looplab/rng.hpp"
#include "looplab/stable.hpp"
#include "looplab/verify.hpp"

namespace {

using nlohmann::json;
using namespace looplab;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--config", c.config_path, "JSON config file");
    sub->add_option("--out", c.out_dir, "output directory for artifacts");
    sub->add_option("--seed", c.seed, "seed override")->each([&c](const std::string&) {
        c.seed_set = true;
    });
}

json load_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

ModelConfig load_config(const CommonOpts& c, json* raw = nullptr) {
    const json j = load_json(c.config_path);
    ModelConfig cfg = config_from_json(j);
    if (c.seed_set) cfg.seed = c.seed;
    if (raw) *raw = j;
    return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream os(p);
    if (!os) throw CLI::ValidationError("--out", "cannot write '" + p.string() + "'");
    return os;
}

// Optional explicit geometry in the config: "loop" and "punctures" as arrays
// of [x, y] pairs.  Absent fields fall back to sampled geometry.
std::optional<PolyPath> loop_from_config(const json& j) {
    if (!j.contains("loop")) return std::nullopt;
    std::vector<Point2> pts;
    for (const auto& p : j.at("loop")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    PolyPath path = make_path(pts);
    if (!path.closed) path = close_loop(path);
    return path;
}

std::optional<PunctureSet> punctures_from_config(const json& j) {
    if (!j.contains("punctures")) return std::nullopt;
    std::vector<Point2> pts;
    for (const auto& p : j.at("punctures"))
        pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return make_puncture_set(std::move(pts));
}

struct Scene {
    PolyPath loop;
    PunctureSet ps;
};

// Geometry for the windings/word commands: explicit arrays when present,
// otherwise loop from stream 0 and cloud from stream 1 of the seed.
Scene load_scene(const ModelConfig& cfg, const json& raw) {
    Scene sc;
    if (auto loop = loop_from_config(raw)) {
        sc.loop = *loop;
    } else {
        Philox rng(cfg.seed, 0);
        sc.loop = close_loop(sample_brownian(cfg.n_steps, rng));
    }
    if (auto ps = punctures_from_config(raw)) {
        sc.ps = *ps;
    } else {
        Philox rng(cfg.seed, 1);
        sc.ps = sample_punctures(cfg, rng).ps;
    }
    return sc;
}

int run_windings(const CommonOpts& c) {
    json raw;
    const ModelConfig cfg = load_config(c, &raw);
    const Scene sc = load_scene(cfg, raw);
    const Word w = word_of_loop(sc.loop, RayIndex(sc.ps));
    const std::vector<PunctureStats> table = word_statistics(w, sc.ps, sc.loop, cfg.K, cfg.epsilon);
    if (c.out_dir.empty()) {
        windings_csv(std::cout, table);
    } else {
        auto os = open_out(c.out_dir, "windings.csv");
        windings_csv(os, table);
        std::cout << "wrote " << c.out_dir << "/windings.csv (" << table.size() << " punctures, word length "
                  << w.size() << ")\n";
    }
    return 0;
}

int run_word(const CommonOpts& c) {
    json raw;
    const ModelConfig cfg = load_config(c, &raw);
    const Scene sc = load_scene(cfg, raw);
    const Word w = word_of_loop(sc.loop, RayIndex(sc.ps));
    const std::string text = to_text(w);
    std::cout << text << "\n";
    if (!c.out_dir.empty()) {
        auto os = open_out(c.out_dir, "word.txt");
        os << text << "\n";
    }
    return 0;
}

int run_decompose(const CommonOpts& c, const std::string& word_text, bool runs) {
    std::string text = word_text;
    if (text.empty()) {
        const json raw = load_json(c.config_path);
        if (raw.contains("word")) text = raw.at("word").get<std::string>();
    }
    if (text.empty())
        throw CLI::ValidationError("--word", "no word given (flag or config field \"word\")");
    const Word g = parse_word(text);
    std::int32_t m = 0;
    for (const Letter l : g.letters) m = std::max(m, std::abs(l));
    std::ostringstream out;
    Word check;
    for (std::int32_t x = 1; x <= m; ++x) {
        const Word cx = semidirect_component(g, x);
        check = concat(check, cx);
        if (cx.empty()) continue;
        out << "x" << x << " -> " << (runs ? to_text_runs(cx) : to_text(cx)) << "\n";
    }
    if (!(check == g)) throw std::logic_error("decompose: components do not multiply back");
    std::cout << out.str();
    if (!c.out_dir.empty()) {
        auto os = open_out(c.out_dir, "decompose.txt");
        os << out.str();
    }
    return 0;
}

int run_holonomy(const CommonOpts& c) {
    const ModelConfig cfg = load_config(c);
    const SimReport rep = run_experiment(cfg);
    const json j = report_to_json(rep);
    if (c.out_dir.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        {
            auto os = open_out(c.out_dir, "report.json");
            os << j.dump(2) << "\n";
        }
        {
            auto os = open_out(c.out_dir, "holonomy.csv");
            holonomy_csv(os, rep);
        }
        if (!rep.replicas.empty()) {
            auto os = open_out(c.out_dir, "windings_0.csv");
            windings_csv(os, rep.replicas.front().table);
        }
        std::cout << "wrote report.json, holonomy.csv, windings_0.csv to " << c.out_dir << " ("
                  << rep.replicas.size() << " replicas, mean punctures " << rep.mean_punctures
                  << ")\n";
    }
    return 0;
}

int run_stable_sample(const CommonOpts& c, const std::string& law, int count, int steps,
                      double sigma_opt) {
    const ModelConfig cfg = load_config(c);
    const int d = cfg.kind.tag == GroupTag::Torus ? cfg.kind.dim : 3;
    Philox rng(cfg.seed, 0);
    std::ostringstream body;
    if (law == "nu") {
        const double sigma = sigma_opt > 0 ? sigma_opt : sigma_for_group(d);
        const StableParams params{d, sigma};
        std::vector<std::string> header;
        for (int i = 0; i < d; ++i) header.push_back("Z_" + std::to_string(i));
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < count; ++i) {
            const AlgebraVec z = nu_sigma_sample(params, rng);
            std::vector<std::string> row;
            for (const double v : z) row.push_back(csv_num(v));
            rows.push_back(std::move(row));
        }
        write_csv(body, header, rows);
    } else {  // nustar
        std::vector<std::string> header;
        const std::size_t cdim = class_coordinate(cfg.kind, identity(cfg.kind)).size();
        for (std::size_t i = 0; i < cdim; ++i) header.push_back("class_coord_" + std::to_string(i));
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < count; ++i) {
            const GroupElem g = nu_star_sample(cfg.kind, steps, rng);
            std::vector<std::string> row;
            for (const double v : class_coordinate(cfg.kind, g)) row.push_back(csv_num(v));
            rows.push_back(std::move(row));
        }
        write_csv(body, header, rows);
    }
    if (c.out_dir.empty()) {
        std::cout << body.str();
    } else {
        auto os = open_out(c.out_dir, "stable.csv");
        os << body.str();
        std::cout << "wrote " << c.out_dir << "/stable.csv (" << count << " samples of " << law
                  << ")\n";
    }
    return 0;
}

int run_braid_test(const CommonOpts& c, int strands, int length, int samples) {
    json raw;
    ModelConfig cfg = load_config(c, &raw);
    if (cfg.kind.tag == GroupTag::Torus && !raw.contains("group")) cfg.kind = GroupKind::su2();
    BraidWord braid;
    if (raw.contains("braid")) {
        braid = braid_from_json(raw.at("braid"));
    } else {
        Philox gen(cfg.seed, 0);
        braid = random_braid(gen, strands, length);
    }
    const GroupKind kind = cfg.kind;
    const auto law = [&kind](int slot, Philox& r) {
        return exp_g(kind, sphere_sample(kind, 0.25 + 0.05 * slot, r));
    };
    Philox rng(cfg.seed, 1);
    const InvarianceReport rep = invariance_test(kind, law, braid, samples, rng);
    std::ostringstream body;
    std::vector<std::vector<std::string>> rows;
    for (const TestReport& t : rep.checks)
        rows.push_back({t.name, csv_num(t.statistic), csv_num(t.p_value), t.pass ? "1" : "0"});
    write_csv(body, {"check", "statistic", "p_value", "pass"}, rows);
    std::cout << "braid strands=" << braid.strands << " length=" << braid.gens.size()
              << " samples=" << samples << " checks=" << rep.checks.size() << " -> "
              << (rep.pass ? "PASS" : "FAIL") << "\n";
    if (!c.out_dir.empty()) {
        auto os = open_out(c.out_dir, "braid_test.csv");
        os << body.str();
    } else {
        std::cout << body.str();
    }
    return rep.pass ? 0 : 1;
}

int run_diffeo_test(const CommonOpts& c, double shear, int draws) {
    json raw;
    const ModelConfig cfg = load_config(c, &raw);
    PolyPath loop;
    if (auto lp = loop_from_config(raw)) {
        loop = *lp;
    } else {
        Philox rng(cfg.seed, 0);
        loop = close_loop(sample_brownian(cfg.n_steps, rng));
        // Scale so the sheared image also stays inside the window disk.
        const double target = 0.9 * cfg.R / (1.0 + std::abs(shear));
        const double f = target / max_radius(loop);
        for (Point2& v : loop.vertices) v = f * v;
    }
    const DiffeoReport rep = diffeo_check(cfg, shear, loop, draws);
    for (const TestReport& t : rep.checks)
        std::cout << t.name << " statistic=" << t.statistic << " p=" << t.p_value << " "
                  << (t.pass ? "pass" : "FAIL") << "\n";
    std::cout << "shear " << shear << ", " << rep.draws << " draws -> "
              << (rep.pass ? "PASS" : "FAIL") << "\n";
    if (!c.out_dir.empty()) {
        std::ostringstream body;
        std::vector<std::vector<std::string>> rows;
        for (const TestReport& t : rep.checks)
            rows.push_back({t.name, csv_num(t.statistic), csv_num(t.p_value), t.pass ? "1" : "0"});
        write_csv(body, {"check", "statistic", "p_value", "pass"}, rows);
        auto os = open_out(c.out_dir, "diffeo_test.csv");
        os << body.str();
    }
    return rep.pass ? 0 : 1;
}

int run_verify(const CommonOpts& c) {
    const std::uint64_t seed = c.seed_set ? c.seed : 1;
    const std::vector<CriterionResult> results = run_verification(seed, &std::cerr);
    print_verification(std::cout, results);
    if (!c.out_dir.empty()) {
        auto os = open_out(c.out_dir, "verify.txt");
        print_verification(os, results);
    }
    return verification_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loop holonomy laboratory"};
    app.require_subcommand(1);

    CommonOpts windings_o, word_o, decompose_o, holonomy_o, stable_o, braid_o, diffeo_o, verify_o;
    std::string decompose_word;
    bool decompose_runs = false;
    std::string stable_law = "nu";
    int stable_count = 1000, stable_steps = 4096;
    double stable_sigma = 0.0;
    int braid_strands = 3, braid_length = 5, braid_samples = 20000;
    double diffeo_shear = 0.7;
    int diffeo_draws = 0;

    auto* windings = app.add_subcommand("windings", "per-puncture winding statistics CSV");
    add_common(windings, windings_o);

    auto* word = app.add_subcommand("word", "homotopy word of a loop");
    add_common(word, word_o);

    auto* decompose = app.add_subcommand("decompose", "per-generator components of a word");
    add_common(decompose, decompose_o);
    decompose->add_option("--word", decompose_word, "word text, e.g. \"x3 x2 x1 x4 x2 x4^-1\"");
    decompose->add_flag("--runs", decompose_runs, "print components in run form x{id}^{exp}");

    auto* holonomy = app.add_subcommand("holonomy", "replicated holonomy experiment");
    add_common(holonomy, holonomy_o);

    auto* stable = app.add_subcommand("stable-sample", "samples of the stable laws as CSV");
    add_common(stable, stable_o);
    stable->add_option("--law", stable_law, "nu (algebra samples) or nustar (group samples)")
        ->check(CLI::IsMember({"nu", "nustar"}));
    stable->add_option("--count", stable_count, "number of samples")->check(CLI::PositiveNumber);
    stable->add_option("--steps", stable_steps, "path mesh for nustar")->check(CLI::PositiveNumber);
    stable->add_option("--sigma", stable_sigma, "scale for nu (default: group constant)");

    auto* braid = app.add_subcommand("braid-test", "braid action invariance check");
    add_common(braid, braid_o);
    braid->add_option("--strands", braid_strands, "strand count for a random braid")
        ->check(CLI::Range(2, 64));
    braid->add_option("--length", braid_length, "word length for a random braid")
        ->check(CLI::PositiveNumber);
    braid->add_option("--samples", braid_samples, "sample count")->check(CLI::PositiveNumber);

    auto* diffeo = app.add_subcommand("diffeo-test", "shear invariance of the holonomy law");
    add_common(diffeo, diffeo_o);
    diffeo->add_option("--shear", diffeo_shear, "shear constant c in (x,y) -> (x+c*y, y)");
    diffeo->add_option("--draws", diffeo_draws, "cloud draws (default: config replicas)");

    auto* verify = app.add_subcommand("verify", "full verification suite (12 checks)");
    add_common(verify, verify_o);

    try {
        app.parse(argc, argv);
        if (windings->parsed()) return run_windings(windings_o);
        if (word->parsed()) return run_word(word_o);
        if (decompose->parsed()) return run_decompose(decompose_o, decompose_word, decompose_runs);
        if (holonomy->parsed()) return run_holonomy(holonomy_o);
        if (stable->parsed())
            return run_stable_sample(stable_o, stable_law, stable_count, stable_steps,
                                     stable_sigma);
        if (braid->parsed()) return run_braid_test(braid_o, braid_strands, braid_length,
                                                   braid_samples);
        if (diffeo->parsed()) return run_diffeo_test(diffeo_o, diffeo_shear, diffeo_draws);
        if (verify->parsed()) return run_verify(verify_o);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const DegeneracyError& e) {
        std::cerr << "degeneracy: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
