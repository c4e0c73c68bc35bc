#pragma once

// Free-group word algebra over an integer alphabet ordered by id (ids are
// 1-based ranks in the puncture order).  A letter is a signed 32-bit integer:
// +k is the generator x_k, -k its inverse.  Words are stored freely reduced.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "looplab/rng.hpp"

namespace looplab {

using Letter = std::int32_t;

struct Word {
    std::vector<Letter> letters;  // freely reduced

    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
};

inline bool is_reduced(const std::vector<Letter>& ls) {
    for (std::size_t i = 0; i + 1 < ls.size(); ++i)
        if (ls[i] == -ls[i + 1]) return false;
    return true;
}

// Free reduction by stack cancellation; also the Word constructor of choice.
inline Word reduce(const std::vector<Letter>& ls) {
    Word w;
    w.letters.reserve(ls.size());
    for (const Letter l : ls) {
        if (l == 0) throw std::invalid_argument("reduce: zero letter");
        if (!w.letters.empty() && w.letters.back() == -l)
            w.letters.pop_back();
        else
            w.letters.push_back(l);
    }
    return w;
}

inline Word concat(const Word& a, const Word& b) {
    std::vector<Letter> ls = a.letters;
    ls.insert(ls.end(), b.letters.begin(), b.letters.end());
    return reduce(ls);
}

inline Word invert(const Word& a) {
    Word w;
    w.letters.reserve(a.size());
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) w.letters.push_back(-*it);
    return w;
}

struct Run {
    std::int32_t id = 0;
    std::int64_t exp = 0;
    friend bool operator==(const Run& a, const Run& b) { return a.id == b.id && a.exp == b.exp; }
};

using RunForm = std::vector<Run>;

// Maximal-run decomposition (a_i, alpha_i); length l(g) = number of runs.
inline RunForm run_form(const Word& g) {
    RunForm rf;
    for (const Letter l : g.letters) {
        const std::int32_t id = std::abs(l);
        const std::int64_t s = l > 0 ? 1 : -1;
        if (!rf.empty() && rf.back().id == id)
            rf.back().exp += s;
        else
            rf.push_back({id, s});
    }
    return rf;
}

inline Word from_run_form(const RunForm& rf) {
    std::vector<Letter> ls;
    for (const Run& r : rf) {
        const Letter l = r.exp > 0 ? r.id : -r.id;
        for (std::int64_t i = 0; i < std::abs(r.exp); ++i) ls.push_back(l);
    }
    return reduce(ls);
}

inline std::size_t word_length(const Word& g) { return run_form(g).size(); }

// pi^{<=x} (strict=false) or pi^{<x} (strict=true): delete letters above the
// cut, then reduce.
inline Word project_leq(const Word& g, std::int32_t x, bool strict = false) {
    std::vector<Letter> kept;
    kept.reserve(g.size());
    for (const Letter l : g.letters) {
        const std::int32_t id = std::abs(l);
        if (id < x || (!strict && id == x)) kept.push_back(l);
    }
    return reduce(kept);
}

// c_x . phi_x(g) = (pi^{<x} g)^{-1} (pi^{<=x} g); the product over x in
// increasing order telescopes back to g.
inline Word semidirect_component(const Word& g, std::int32_t x) {
    return concat(invert(project_leq(g, x, true)), project_leq(g, x, false));
}

// Independent oracle: the explicit product of conjugates
//   prod_{i in I_x(g)} w_i^{-1} x^{alpha_i} w_i,
// where w_i is the below-x projection of the suffix a_{i+1}^{alpha_{i+1}} ...
// a_l^{alpha_l}.  Quadratic, used to cross-check semidirect_component.
inline Word semidirect_component_explicit(const Word& g, std::int32_t x) {
    const RunForm rf = run_form(g);
    Word result;
    // Walk from the right, maintaining the projected suffix word.
    std::vector<Word> factors;
    Word suffix_proj;  // pi^{<x} of the suffix after run i
    for (std::size_t i = rf.size(); i-- > 0;) {
        if (rf[i].id == x) {
            RunForm power{{x, rf[i].exp}};
            Word f = concat(concat(invert(suffix_proj), from_run_form(power)), suffix_proj);
            factors.push_back(std::move(f));
        }
        if (rf[i].id < x) {
            RunForm single{rf[i]};
            suffix_proj = concat(from_run_form(single), suffix_proj);
        }
    }
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) result = concat(result, *it);
    return result;
}

// alpha_x(g): run exponents of x in order of appearance.
inline std::vector<std::int64_t> alpha_seq(const Word& g, std::int32_t x) {
    std::vector<std::int64_t> alpha;
    for (const Run& r : run_form(g))
        if (r.id == x) alpha.push_back(r.exp);
    return alpha;
}

inline std::int64_t abelian_exponent(const Word& g, std::int32_t x) {
    std::int64_t s = 0;
    for (const Letter l : g.letters) {
        if (l == x) ++s;
        if (l == -x) --s;
    }
    return s;
}

// beta: entries sorted by decreasing |.|, ties broken larger signed value
// first.  S^{(i)} = sum of |beta_k| for k >= i (1-based), i.e. all but the
// i-1 largest absolute values.
inline std::vector<std::int64_t> beta_sorted(std::vector<std::int64_t> alpha) {
    std::sort(alpha.begin(), alpha.end(), [](std::int64_t a, std::int64_t b) {
        const std::int64_t aa = std::abs(a), ab = std::abs(b);
        return aa > ab || (aa == ab && a > b);
    });
    return alpha;
}

inline std::int64_t tail_sum(const std::vector<std::int64_t>& beta, int i) {
    if (i < 1) throw std::invalid_argument("tail_sum: need i >= 1");
    std::int64_t s = 0;
    for (std::size_t k = static_cast<std::size_t>(i) - 1; k < beta.size(); ++k)
        s += std::abs(beta[k]);
    return s;
}

struct ExponentStats {
    std::vector<std::int64_t> alpha;
    std::vector<std::int64_t> beta;
    std::int64_t S_i = 0;
};

inline ExponentStats exponent_stats(const Word& g, std::int32_t x, int i) {
    ExponentStats st;
    st.alpha = alpha_seq(g, x);
    st.beta = beta_sorted(st.alpha);
    st.S_i = tail_sum(st.beta, i);
    return st;
}

// u refines v (u ≼ v): u arises from v by repeatedly replacing an adjacent
// pair by its sum, zero results dropped.  Decided by memoized search over
// block partitions: v is cut into consecutive blocks, each block either sums
// to the next entry of u or to zero (dropped).
inline bool refines(const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v) {
    const std::size_t nu = u.size(), nv = v.size();
    if (nu > nv) return false;
    // memo[i][j]: can u[i..] be produced from v[j..]?  0 unknown, 1 yes, 2 no.
    std::vector<std::uint8_t> memo((nu + 1) * (nv + 1), 0);
    const auto at = [&](std::size_t i, std::size_t j) -> std::uint8_t& {
        return memo[i * (nv + 1) + j];
    };
    const std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                                 std::size_t j) -> bool {
        if (i == nu && j == nv) return true;
        if (j == nv) return false;
        auto& m = at(i, j);
        if (m) return m == 1;
        bool ok = false;
        std::int64_t s = 0;
        for (std::size_t k = j; k < nv && !ok; ++k) {
            s += v[k];
            if (i < nu && s == u[i] && go(i + 1, k + 1)) ok = true;
            if (!ok && s == 0 && go(i, k + 1)) ok = true;
        }
        m = ok ? 1 : 2;
        return ok;
    };
    return go(0, 0);
}

// |g|_2 = sqrt( sum_x S1(x, pi^{<=x} g)^2 ).
inline double word_norm2(const Word& g) {
    std::vector<std::int32_t> ids;
    for (const Letter l : g.letters) ids.push_back(std::abs(l));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    double acc = 0.0;
    for (const std::int32_t x : ids) {
        const Word p = project_leq(g, x);
        const auto alpha = alpha_seq(p, x);
        std::int64_t s1 = 0;
        for (const auto a : alpha) s1 += std::abs(a);
        acc += static_cast<double>(s1) * static_cast<double>(s1);
    }
    return std::sqrt(acc);
}

// Greedy split of a positive sequence into i consecutive blocks, each of sum
// >= floor(S^(i)/i); existence is the content of the block lemma, enforced by
// assertions.
inline std::vector<std::size_t> block_split(const std::vector<double>& u, int i) {
    if (u.empty() || i < 1) throw std::invalid_argument("block_split: need nonempty u, i >= 1");
    if (static_cast<std::size_t>(i) > u.size())
        throw std::invalid_argument("block_split: need i <= len(u)");
    for (const double v : u)
        if (!(v > 0.0)) throw std::invalid_argument("block_split: entries must be positive");
    std::vector<double> sorted = u;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double s_i = 0.0;
    for (std::size_t k = static_cast<std::size_t>(i) - 1; k < sorted.size(); ++k)
        s_i += sorted[k];
    const double m = std::floor(s_i / i);

    std::vector<std::size_t> splits{0};
    std::size_t pos = 0;
    for (int b = 0; b < i - 1; ++b) {
        double acc = 0.0;
        while (acc < m || acc == 0.0) {  // m == 0 still closes nonempty blocks
            assert(pos < u.size() && "block_split: greedy ran out of elements");
            acc += u[pos++];
        }
        splits.push_back(pos);
    }
    assert(pos < u.size() && "block_split: no elements left for the final block");
    splits.push_back(u.size());
    double last = 0.0;
    for (std::size_t k = pos; k < u.size(); ++k) last += u[k];
    assert(last >= m - 1e-9 * std::max(1.0, m) &&
           "block_split: final block below the guaranteed bound");
    return splits;
}

// ---------------------------------------------------------------------------
// Descending-deletion cascade: computes alpha_x(pi^{<=x}(g)) for every id x in
// one linear pass.  Ids are processed from the largest down; at the start of
// x's round the doubly-linked list holds the reduced word pi^{<=x}(g), the
// runs of x are recorded, then every x-letter is removed with free reduction
// cascading around the splice points.
// ---------------------------------------------------------------------------
struct CascadeResult {
    std::vector<std::int32_t> ids;                     // descending
    std::vector<std::vector<std::int64_t>> alpha_leq;  // aligned with ids
};

inline CascadeResult all_alpha_leq(const Word& g) {
    const std::int32_t n = static_cast<std::int32_t>(g.size());
    std::vector<std::int32_t> next(n + 1), prev(n + 1);
    std::vector<std::uint8_t> alive(n, 1);
    // Node n is the sentinel; the list is circular through it.
    for (std::int32_t i = 0; i <= n; ++i) {
        next[i] = (i + 1) % (n + 1);
        prev[(i + 1) % (n + 1)] = i;
    }
    // occurrence lists per id, in position order
    std::map<std::int32_t, std::vector<std::int32_t>, std::greater<>> occ;
    for (std::int32_t i = 0; i < n; ++i) occ[std::abs(g.letters[i])].push_back(i);

    const auto erase_node = [&](std::int32_t v) {
        alive[v] = 0;
        next[prev[v]] = next[v];
        prev[next[v]] = prev[v];
    };

    CascadeResult out;
    for (const auto& [x, positions] : occ) {
        // Record runs of x on the current (reduced) list.
        std::vector<std::int64_t> alpha;
        for (const std::int32_t p : positions) {
            if (!alive[p]) continue;
            const std::int32_t pr = prev[p];
            if (pr != n && std::abs(g.letters[pr]) == x) continue;  // not a run head
            std::int64_t e = 0;
            for (std::int32_t q = p; q != n && std::abs(g.letters[q]) == x; q = next[q])
                e += g.letters[q] > 0 ? 1 : -1;
            alpha.push_back(e);
        }
        out.ids.push_back(x);
        out.alpha_leq.push_back(std::move(alpha));
        // Delete all x letters, cascading cancellations at each splice.
        for (const std::int32_t p : positions) {
            if (!alive[p]) continue;
            erase_node(p);
            std::int32_t l = prev[p], r = next[p];
            while (l != n && r != n && g.letters[l] == -g.letters[r]) {
                const std::int32_t l2 = prev[l], r2 = next[r];
                erase_node(l);
                erase_node(r);
                l = l2;
                r = r2;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization: "x{id}" and "x{id}^-1" word tokens; "x{id}^{exp}" run tokens.
// ---------------------------------------------------------------------------
inline std::string to_text(const Word& g) {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.letters.size(); ++i) {
        if (i) os << ' ';
        const Letter l = g.letters[i];
        os << 'x' << std::abs(l);
        if (l < 0) os << "^-1";
    }
    return os.str();
}

inline std::string to_text_runs(const Word& g) {
    std::ostringstream os;
    const RunForm rf = run_form(g);
    for (std::size_t i = 0; i < rf.size(); ++i) {
        if (i) os << ' ';
        os << 'x' << rf[i].id << '^' << rf[i].exp;
    }
    return os.str();
}

// Accepts both plain-letter and run tokens.
inline Word parse_word(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    std::vector<Letter> ls;
    while (is >> tok) {
        if (tok.empty() || (tok[0] != 'x' && tok[0] != 'X'))
            throw std::invalid_argument("parse_word: bad token '" + tok + "'");
        const std::size_t caret = tok.find('^');
        const std::string id_part = tok.substr(1, caret == std::string::npos ? std::string::npos
                                                                             : caret - 1);
        std::int64_t exp = 1;
        std::size_t pos = 0;
        const std::int32_t id = std::stoi(id_part, &pos);
        if (pos != id_part.size() || id <= 0)
            throw std::invalid_argument("parse_word: bad id in '" + tok + "'");
        if (caret != std::string::npos) {
            const std::string exp_part = tok.substr(caret + 1);
            exp = std::stoll(exp_part, &pos);
            if (pos != exp_part.size() || exp == 0)
                throw std::invalid_argument("parse_word: bad exponent in '" + tok + "'");
        }
        const Letter l = exp > 0 ? id : -id;
        for (std::int64_t k = 0; k < std::abs(exp); ++k) ls.push_back(l);
    }
    return reduce(ls);
}

// Random freely reduced word (uniform letters, immediate backtracking barred).
inline Word random_reduced_word(Philox& rng, std::size_t len, std::int32_t alphabet) {
    std::vector<Letter> ls;
    ls.reserve(len);
    while (ls.size() < len) {
        const std::int32_t id = 1 + static_cast<std::int32_t>(uniform01(rng) * alphabet);
        const Letter l = uniform01(rng) < 0.5 ? id : -id;
        if (!ls.empty() && ls.back() == -l) continue;
        ls.push_back(l);
    }
    Word w;
    w.letters = std::move(ls);
    return w;
}

}  // namespace looplab
