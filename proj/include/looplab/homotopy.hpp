#pragma once

// Exact homotopy words of piecewise-linear loops in the punctured plane.
//
// Each puncture x carries a cut ray from x in direction x/|x| (away from the
// origin).  The class of a loop in the free group on the punctures is read off
// by listing transversal ray crossings in time order; crossing the ray of x
// with the ray direction on one's left contributes x, the other way x^-1.
// The generator loop "out to x, once counterclockwise around it, back" reads
// as the single letter x under this convention.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "looplab/freegroup.hpp"
#include "looplab/geometry.hpp"

namespace looplab {

struct CutRay {
    std::int32_t id = 0;
    Point2 base;  // the puncture
    Point2 dir;   // unit vector base/|base|
};

struct CrossingEvent {
    double time = 0.0;
    std::int32_t id = 0;
    int sign = 0;  // +1: edge crosses with increasing cross(dir, .)
    friend bool operator==(const CrossingEvent& a, const CrossingEvent& b) {
        return a.time == b.time && a.id == b.id && a.sign == b.sign;
    }
};

// Angular index over the cut rays.  A ray's points all share the polar angle
// of its puncture, so an edge can only meet rays whose angle falls in the
// cone the edge subtends at the origin (padded for roundoff).  Near-origin
// edges fall back to scanning every ray.
class RayIndex {
  public:
    explicit RayIndex(const PunctureSet& ps) {
        rays_.reserve(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const Point2 x = ps.points[i];
            const double r = norm(x);
            rays_.push_back(Entry{std::atan2(x.y, x.x), r,
                                  CutRay{static_cast<std::int32_t>(i) + 1, x,
                                         {x.x / r, x.y / r}}});
        }
        std::sort(rays_.begin(), rays_.end(),
                  [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
        double r_min = rays_.empty() ? 1.0 : rays_.front().radius;
        for (const Entry& e : rays_) r_min = std::min(r_min, e.radius);
        pad_ = 1e-9 + 2.0 * kTol / r_min;
    }

    std::size_t size() const { return rays_.size(); }

    // Appends crossings of the edge a->b (endpoint times ta, tb) to out.
    // The edge is canonicalized by endpoint order before the ray tests, so a
    // reversed edge yields bitwise-mirrored events (times 1-t, signs flipped).
    // brute = true skips the angular pruning (oracle mode).
    void edge_crossings(const Point2& a, const Point2& b, double ta, double tb,
                        std::vector<CrossingEvent>& out, bool brute = false) const {
        const bool flip = b.x < a.x || (b.x == a.x && b.y < a.y);
        const Point2& ca = flip ? b : a;
        const Point2& cb = flip ? a : b;
        std::vector<CrossingEvent> local;
        collect(ca, cb, local, brute);
        std::sort(local.begin(), local.end(),
                  [](const CrossingEvent& u, const CrossingEvent& v) { return u.time < v.time; });
        if (flip) {
            std::reverse(local.begin(), local.end());
            for (CrossingEvent& e : local) {
                e.time = 1.0 - e.time;
                e.sign = -e.sign;
            }
        }
        for (const CrossingEvent& e : local) {
            out.push_back(CrossingEvent{ta + e.time * (tb - ta), e.id, e.sign});
        }
    }

  private:
    struct Entry {
        double angle = 0.0;
        double radius = 0.0;
        CutRay ray;
    };

    // Exact edge/ray test.  Throws DegeneracyError for vertices on the ray,
    // edges through the puncture, and collinear overlap with the ray.
    static void test_pair(const Point2& a, const Point2& b, const Entry& e,
                          std::vector<CrossingEvent>& out) {
        const Point2& p = e.ray.base;
        const Point2& u = e.ray.dir;
        const Point2 pa = a - p, pb = b - p;
        const double ha = cross(u, pa), hb = cross(u, pb);
        const double da = dot(pa, u), db = dot(pb, u);
        if (std::abs(ha) <= kTol && da >= -kTol)
            throw DegeneracyError("crossing_sequence: path vertex on a cut ray");
        if (std::abs(hb) <= kTol && db >= -kTol)
            throw DegeneracyError("crossing_sequence: path vertex on a cut ray");
        // Near-line endpoints are now known to sit behind the puncture; any
        // line crossing next to them happens at negative ray parameter.
        if (std::abs(ha) <= kTol || std::abs(hb) <= kTol) return;
        if ((ha > 0.0) == (hb > 0.0)) return;  // no line crossing
        const double t = ha / (ha - hb);       // in (0,1): strict opposite signs
        const double s = da + t * (db - da);   // ray parameter of the hit
        if (std::abs(s) <= kTol)
            throw DegeneracyError("crossing_sequence: path passes through a puncture");
        if (s < 0.0) return;
        out.push_back(CrossingEvent{t, e.ray.id, hb > 0.0 ? 1 : -1});
    }

    void collect(const Point2& a, const Point2& b, std::vector<CrossingEvent>& out,
                 bool brute) const {
        const double reach = std::max(norm(a), norm(b)) + kTol;
        if (brute || dist2_point_segment({0.0, 0.0}, a, b) <= 1e-18) {
            for (const Entry& e : rays_) {
                if (e.radius <= reach) test_pair(a, b, e, out);
            }
            return;
        }
        const double alpha = std::atan2(a.y, a.x);
        const double beta = std::atan2(b.y, b.x);
        const double delta = std::remainder(beta - alpha, 2.0 * kPi);
        const double lo = std::min(0.0, delta) - pad_;
        const double hi = std::max(0.0, delta) + pad_;
        const auto visit = [&](double from, double to) {  // angles in (-pi, pi]
            const auto first = std::lower_bound(
                rays_.begin(), rays_.end(), from,
                [](const Entry& e, double v) { return e.angle < v; });
            for (auto it = first; it != rays_.end() && it->angle <= to; ++it) {
                if (it->radius <= reach) test_pair(a, b, *it, out);
            }
        };
        // The padded cone [alpha+lo, alpha+hi] has width < 2*pi; wrap it into
        // at most two sorted ranges.
        double from = std::remainder(alpha + lo, 2.0 * kPi);
        const double width = hi - lo;
        if (from + width <= kPi) {
            visit(from, from + width);
        } else {
            visit(from, kPi);
            visit(-kPi, from + width - 2.0 * kPi);
        }
    }

    std::vector<Entry> rays_;
    double pad_ = 1e-9;
};

// All transversal cut-ray crossings of the path, in time order.
inline std::vector<CrossingEvent> crossing_sequence(const PolyPath& path, const RayIndex& index) {
    std::vector<CrossingEvent> events;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        index.edge_crossings(path.vertices[i], path.vertices[i + 1], path.times[i],
                             path.times[i + 1], events);
    }
    return events;
}

inline std::vector<CrossingEvent> crossing_sequence(const PolyPath& path, const PunctureSet& ps) {
    return crossing_sequence(path, RayIndex(ps));
}

// Brute-force twin: identical output, no angular pruning.
inline std::vector<CrossingEvent> crossing_sequence_brute(const PolyPath& path,
                                                          const RayIndex& index) {
    std::vector<CrossingEvent> events;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        index.edge_crossings(path.vertices[i], path.vertices[i + 1], path.times[i],
                             path.times[i + 1], events, /*brute=*/true);
    }
    return events;
}

inline Word word_of_events(const std::vector<CrossingEvent>& events) {
    std::vector<Letter> letters;
    letters.reserve(events.size());
    for (const CrossingEvent& e : events) letters.push_back(e.sign > 0 ? e.id : -e.id);
    return reduce(letters);
}

// Reduced homotopy word of a closed loop; earliest crossing = leftmost letter.
inline Word word_of_loop(const PolyPath& loop, const RayIndex& index) {
    if (!loop.closed) throw std::invalid_argument("word_of_loop: loop must be closed");
    return word_of_events(crossing_sequence(loop, index));
}

inline Word word_of_loop(const PolyPath& loop, const PunctureSet& ps) {
    return word_of_loop(loop, RayIndex(ps));
}

// Word of the loop (origin -> path(s)) . path[s,t] . (path(t) -> origin).
// Satisfies the chain rule: word(s,u) * word(u,t) reduces to word(s,t).
inline Word word_of_subloop(const PolyPath& path, double s, double t, const RayIndex& index) {
    if (!(0.0 <= s && s < t && t <= 1.0))
        throw std::invalid_argument("word_of_subloop: need 0 <= s < t <= 1");
    const PolyPath mid = sub_path(path, s, t);
    std::vector<Point2> vs;
    vs.reserve(mid.vertices.size() + 2);
    vs.push_back({0.0, 0.0});
    for (const Point2& v : mid.vertices) {
        if (norm(v - vs.back()) > kTol) vs.push_back(v);
    }
    if (norm(vs.back()) > kTol)
        vs.push_back({0.0, 0.0});
    else
        vs.back() = {0.0, 0.0};
    if (vs.size() < 2) return Word{};  // the subloop never leaves the basepoint
    return word_of_loop(make_path(std::move(vs)), index);
}

inline Word word_of_subloop(const PolyPath& path, double s, double t, const PunctureSet& ps) {
    return word_of_subloop(path, s, t, RayIndex(ps));
}

}  // namespace looplab
