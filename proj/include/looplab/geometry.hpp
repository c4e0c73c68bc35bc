#pragma once

// Exact planar-path primitives: winding numbers, half-turn counts, puncture
// spacing, loop closure, and a grid index that answers winding queries against
// a fixed polyline loop in ~O(1).
//
// Degeneracy policy, used throughout: anything within kTol = 1e-12 of a
// configuration where a sign is ambiguous (query point on a segment, vertex on
// a reference line, ...) raises DegeneracyError.  Sampling code catches it and
// resamples; deterministic callers see the error instead of a guessed sign.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "looplab/rng.hpp"

namespace looplab {

inline constexpr double kTol = 1e-12;
inline constexpr double kPi = 3.14159265358979323846;

struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::sqrt(norm2(a)); }

// Squared distance from p to segment [a,b].
inline double dist2_point_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double denom = norm2(ab);
    double t = denom > 0.0 ? dot(p - a, ab) / denom : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm2(p - (a + t * ab));
}

// Piecewise-linear path on [0,1]; vertices[i] is the position at times[i].
struct PolyPath {
    std::vector<Point2> vertices;
    std::vector<double> times;
    bool closed = false;

    std::size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }

    void validate() const {
        if (vertices.size() < 2) throw std::invalid_argument("PolyPath: need at least 2 vertices");
        if (times.size() != vertices.size())
            throw std::invalid_argument("PolyPath: times/vertices length mismatch");
        if (times.front() != 0.0) throw std::invalid_argument("PolyPath: times must start at 0");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("PolyPath: times must be strictly increasing");
        if (closed && !(vertices.front() == vertices.back()))
            throw std::invalid_argument("PolyPath: closed path must return to start");
    }
};

inline PolyPath make_path(std::vector<Point2> vs) {
    if (vs.size() < 2) throw std::invalid_argument("make_path: need at least 2 vertices");
    PolyPath p;
    p.times.resize(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        p.times[i] = static_cast<double>(i) / static_cast<double>(vs.size() - 1);
    p.vertices = std::move(vs);
    p.closed = p.vertices.front() == p.vertices.back();
    return p;
}

// Position at parameter t (linear interpolation between vertices).
inline Point2 point_at(const PolyPath& path, double t) {
    const auto& ts = path.times;
    if (t <= ts.front()) return path.vertices.front();
    if (t >= ts.back()) return path.vertices.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    const double lam = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return path.vertices[i] + lam * (path.vertices[i + 1] - path.vertices[i]);
}

// Restriction of path to [s,t], with fractional endpoints interpolated.
inline PolyPath sub_path(const PolyPath& path, double s, double t) {
    if (!(s < t)) throw std::invalid_argument("sub_path: need s < t");
    PolyPath out;
    out.vertices.push_back(point_at(path, s));
    out.times.push_back(0.0);
    for (std::size_t i = 0; i < path.vertices.size(); ++i) {
        if (path.times[i] > s && path.times[i] < t) {
            out.vertices.push_back(path.vertices[i]);
            out.times.push_back(path.times[i] - s);
        }
    }
    out.vertices.push_back(point_at(path, t));
    out.times.push_back(t - s);
    for (auto& u : out.times) u /= (t - s);
    // Interpolated endpoints can coincide with kept vertices; drop dup times.
    PolyPath clean;
    for (std::size_t i = 0; i < out.vertices.size(); ++i) {
        if (!clean.times.empty() && !(out.times[i] > clean.times.back())) continue;
        clean.vertices.push_back(out.vertices[i]);
        clean.times.push_back(out.times[i]);
    }
    if (clean.vertices.size() < 2) {
        clean.vertices.push_back(clean.vertices.back());
        clean.times.push_back(1.0);
    }
    clean.times.back() = 1.0;
    return clean;
}

inline PolyPath reverse_path(const PolyPath& path) {
    PolyPath out;
    const std::size_t n = path.vertices.size();
    out.vertices.resize(n);
    out.times.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.vertices[i] = path.vertices[n - 1 - i];
        out.times[i] = path.times.back() - path.times[n - 1 - i];
    }
    out.closed = path.closed;
    return out;
}

// Appends the straight return segment and renormalizes time to [0,1].
inline PolyPath close_loop(const PolyPath& path) {
    path.validate();
    if (path.closed || path.vertices.front() == path.vertices.back())
        throw std::invalid_argument("close_loop: path already closed");
    PolyPath out = path;
    const double scale =
        static_cast<double>(out.edge_count()) / static_cast<double>(out.edge_count() + 1);
    const double t_end = out.times.back();
    for (auto& t : out.times) t = (t / t_end) * scale;
    out.vertices.push_back(out.vertices.front());
    out.times.push_back(1.0);
    out.closed = true;
    return out;
}

inline double max_radius(const PolyPath& path) {
    double m = 0.0;
    for (const auto& v : path.vertices) m = std::max(m, norm(v));
    return m;
}

// Exact winding number by signed crossings of the rightward horizontal ray
// from p, with the half-open vertex rule.  Throws if p is within kTol of the
// loop.
inline int winding_number(const PolyPath& loop, Point2 p) {
    if (!loop.closed) throw std::invalid_argument("winding_number: loop must be closed");
    int w = 0;
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        const Point2 a = loop.vertices[i];
        const Point2 b = loop.vertices[i + 1];
        if (dist2_point_segment(p, a, b) <= kTol * kTol)
            throw DegeneracyError("winding_number: point on loop");
        const bool below_a = a.y <= p.y;
        const bool below_b = b.y <= p.y;
        if (below_a == below_b) continue;
        const double orient = cross(b - a, p - a);
        if (below_a) {  // upward crossing; count if p strictly left of the edge
            if (orient > 0.0) ++w;
        } else {  // downward crossing; count if p strictly right of the edge
            if (orient < 0.0) --w;
        }
    }
    return w;
}

// Independent route: sum of signed angle increments, rounded to the nearest
// integer.  Agrees exactly with winding_number away from degeneracies.
inline int winding_number_angle_sum(const PolyPath& loop, Point2 p) {
    if (!loop.closed) throw std::invalid_argument("winding_number: loop must be closed");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        const Point2 a = loop.vertices[i] - p;
        const Point2 b = loop.vertices[i + 1] - p;
        if (dist2_point_segment({0, 0}, a, b) <= kTol * kTol)
            throw DegeneracyError("winding_number_angle_sum: point on loop");
        total += std::atan2(cross(a, b), dot(a, b));
    }
    const double turns = total / (2.0 * kPi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.25)
        throw DegeneracyError("winding_number_angle_sum: angle sum far from integer");
    return static_cast<int>(rounded);
}

// Half-turn count theta_1/2(p, path).  d1 is the half-line from p in the
// direction of p/|p| rotated by +pi/2; d2 is the opposite half-line.  Starting
// from t0 = 0 the path must hit d1, d2, d1, ... alternately; the count is the
// last realized index plus one.  Touching a half-line (including at t = 0 or
// at the final vertex) counts as a hit.
inline int half_turn_count(const PolyPath& path, Point2 p) {
    const double r = norm(p);
    if (r <= kTol) throw std::invalid_argument("half_turn_count: p at origin");
    const Point2 u{p.x / r, p.y / r};   // radial direction; f = q.u - r is 0 on the line
    const Point2 w{-u.y, u.x};          // d1 direction; s = q.w sorts the two half-lines

    int hits = 0;
    int want = +1;  // sign of s on the half-line we are waiting for (+1 = d1)

    const auto on_line_hit = [&](Point2 q) {
        const double s = dot(q, w);
        if (std::abs(s) <= kTol) throw DegeneracyError("half_turn_count: path at p");
        if ((s > 0.0 ? +1 : -1) == want) {
            ++hits;
            want = -want;
        }
    };

    const std::size_t n = path.vertices.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = dot(path.vertices[i], u) - r;

    if (std::abs(f[0]) <= kTol) on_line_hit(path.vertices[0]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool a_on = std::abs(f[i]) <= kTol;
        const bool b_on = std::abs(f[i + 1]) <= kTol;
        if (a_on && b_on)
            throw DegeneracyError("half_turn_count: segment along the reference line");
        if (!a_on && !b_on && f[i] * f[i + 1] < 0.0) {
            const double lam = f[i] / (f[i] - f[i + 1]);
            on_line_hit(path.vertices[i] + lam * (path.vertices[i + 1] - path.vertices[i]));
        }
        if (b_on) on_line_hit(path.vertices[i + 1]);
    }
    return hits + 1;
}

// Punctures with 1-based ids assigned by increasing Euclidean norm.
struct PunctureSet {
    std::vector<Point2> points;  // sorted by norm ascending; id = index + 1

    std::size_t size() const { return points.size(); }

    // Checks the proper-basis preconditions: away from origin, pairwise
    // distinct norms, no two points collinear with the origin.
    void validate() const {
        const std::size_t m = points.size();
        std::vector<double> r(m);
        for (std::size_t i = 0; i < m; ++i) {
            r[i] = norm(points[i]);
            if (r[i] <= kTol) throw DegeneracyError("PunctureSet: puncture at origin");
            if (i > 0 && !(r[i] > r[i - 1] + kTol))
                throw DegeneracyError("PunctureSet: norms not strictly increasing");
        }
        std::vector<std::size_t> by_angle(m);
        for (std::size_t i = 0; i < m; ++i) by_angle[i] = i;
        std::vector<double> ang(m);
        for (std::size_t i = 0; i < m; ++i) ang[i] = std::atan2(points[i].y, points[i].x);
        std::sort(by_angle.begin(), by_angle.end(),
                  [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });
        const auto collinear = [&](std::size_t a, std::size_t b) {
            // |sin| of the angle between the two radial directions
            return std::abs(cross(points[a], points[b])) <= kTol * r[a] * r[b] ||
                   std::abs(dot(points[a], points[b])) >= (1.0 - kTol) * r[a] * r[b];
        };
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (collinear(by_angle[i], by_angle[i + 1]))
                throw DegeneracyError("PunctureSet: collinear with origin");
        if (m >= 2 && collinear(by_angle[m - 1], by_angle[0]))
            throw DegeneracyError("PunctureSet: collinear with origin");
    }
};

inline PunctureSet make_puncture_set(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(),
              [](Point2 a, Point2 b) { return norm2(a) < norm2(b); });
    PunctureSet ps{std::move(pts)};
    ps.validate();
    return ps;
}

// delta(P): minimal pairwise distance among the punctures and the origin.
// Plane-sweep closest pair, O(m log m); brute-force twin for tests.
inline double min_spacing_brute(const PunctureSet& ps) {
    std::vector<Point2> pts = ps.points;
    pts.push_back({0.0, 0.0});
    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best2 = std::min(best2, norm2(pts[i] - pts[j]));
    return std::sqrt(best2);
}

inline double min_spacing(const PunctureSet& ps) {
    if (ps.points.empty()) throw std::invalid_argument("min_spacing: empty set");
    std::vector<Point2> pts = ps.points;
    pts.push_back({0.0, 0.0});
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    // Sweep with an active window ordered by y (classic closest pair).
    std::multiset<std::pair<double, double>> active;  // (y, x)
    double best2 = std::numeric_limits<double>::infinity();
    std::size_t tail = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2 p = pts[i];
        const double bd = std::sqrt(best2);
        while (tail < i && pts[tail].x < p.x - bd) {
            active.erase(active.find({pts[tail].y, pts[tail].x}));
            ++tail;
        }
        for (auto it = active.lower_bound({p.y - bd, -std::numeric_limits<double>::infinity()});
             it != active.end() && it->first <= p.y + bd; ++it) {
            const Point2 q{it->second, it->first};
            best2 = std::min(best2, norm2(q - p));
        }
        active.insert({p.y, p.x});
    }
    return std::sqrt(best2);
}

// ---------------------------------------------------------------------------
// WindingIndex: cell grid over a closed loop answering exact winding queries.
//
// Each cell stores the winding at an interior reference point plus the edges
// meeting the cell; a query walks the straight segment from the reference
// point to the query point and accumulates signed curve crossings.  Any
// ambiguous predicate (vertex on the walk, query near the curve) falls back to
// the O(n) routine or raises DegeneracyError, so results always equal
// winding_number exactly.
// ---------------------------------------------------------------------------
class WindingIndex {
public:
    WindingIndex(const PolyPath& loop, int grid_hint = 0) : loop_(&loop) {
        if (!loop.closed) throw std::invalid_argument("WindingIndex: loop must be closed");
        const auto& vs = loop.vertices;
        double xmin = vs[0].x, xmax = vs[0].x, ymin = vs[0].y, ymax = vs[0].y;
        for (const auto& v : vs) {
            xmin = std::min(xmin, v.x); xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y); ymax = std::max(ymax, v.y);
        }
        const double span = std::max({xmax - xmin, ymax - ymin, 1e-6});
        const double margin = 1e-6 * span + 1e-9;
        x0_ = xmin - margin; y0_ = ymin - margin;
        const double extent = span + 2.0 * margin;
        n_ = grid_hint > 0 ? grid_hint
                           : std::clamp(static_cast<int>(std::sqrt(
                                            static_cast<double>(loop.edge_count()))),
                                        64, 2048);
        h_ = extent / n_;
        x1_ = x0_ + n_ * h_; y1_ = y0_ + n_ * h_;
        build();
    }

    // Exact winding; throws DegeneracyError when p is within kTol of the loop.
    int winding(Point2 p) const {
        bool degenerate = false;
        const int w = winding_checked(p, degenerate);
        if (degenerate) throw DegeneracyError("WindingIndex: point on loop");
        return w;
    }

    // Fast path for samplers: returns false when p is within kTol of the loop.
    bool try_winding(Point2 p, int& w_out) const {
        bool degenerate = false;
        w_out = winding_checked(p, degenerate);
        return !degenerate;
    }

    int grid_size() const { return n_; }

private:
    int cell_of(double v, double lo) const {
        int c = static_cast<int>((v - lo) / h_);
        return std::clamp(c, 0, n_ - 1);
    }

    void build() {
        const auto& vs = loop_->vertices;
        const std::size_t ne = loop_->edge_count();
        // Bucket edges into cells (conservative: all cells of the edge AABB
        // when small, else a traversal band around the segment).
        std::vector<std::vector<std::int32_t>> cell_edges(
            static_cast<std::size_t>(n_) * n_);
        for (std::size_t e = 0; e < ne; ++e) {
            const Point2 a = vs[e], b = vs[e + 1];
            int cx0 = cell_of(std::min(a.x, b.x) - 2 * kTol, x0_);
            int cx1 = cell_of(std::max(a.x, b.x) + 2 * kTol, x0_);
            int cy0 = cell_of(std::min(a.y, b.y) - 2 * kTol, y0_);
            int cy1 = cell_of(std::max(a.y, b.y) + 2 * kTol, y0_);
            const long long cells =
                (static_cast<long long>(cx1 - cx0) + 1) * (cy1 - cy0 + 1);
            if (cells <= 64) {
                for (int cy = cy0; cy <= cy1; ++cy)
                    for (int cx = cx0; cx <= cx1; ++cx)
                        cell_edges[static_cast<std::size_t>(cy) * n_ + cx].push_back(
                            static_cast<std::int32_t>(e));
            } else {
                // Long edge: visit traversed cells plus their 8 neighbours.
                const int steps = 2 * std::max(cx1 - cx0, cy1 - cy0) + 2;
                int last_cx = -2, last_cy = -2;
                for (int s = 0; s <= steps; ++s) {
                    const double t = static_cast<double>(s) / steps;
                    const Point2 q = a + t * (b - a);
                    const int cx = cell_of(q.x, x0_), cy = cell_of(q.y, y0_);
                    if (cx == last_cx && cy == last_cy) continue;
                    last_cx = cx; last_cy = cy;
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int ux = cx + dx, uy = cy + dy;
                            if (ux < 0 || ux >= n_ || uy < 0 || uy >= n_) continue;
                            auto& lst = cell_edges[static_cast<std::size_t>(uy) * n_ + ux];
                            if (lst.empty() || lst.back() != static_cast<std::int32_t>(e))
                                lst.push_back(static_cast<std::int32_t>(e));
                        }
                }
            }
        }
        // Flatten.
        offsets_.assign(static_cast<std::size_t>(n_) * n_ + 1, 0);
        for (std::size_t c = 0; c < cell_edges.size(); ++c)
            offsets_[c + 1] = offsets_[c] + static_cast<std::int64_t>(cell_edges[c].size());
        edges_.resize(static_cast<std::size_t>(offsets_.back()));
        for (std::size_t c = 0; c < cell_edges.size(); ++c) {
            std::copy(cell_edges[c].begin(), cell_edges[c].end(),
                      edges_.begin() + offsets_[c]);
            // sort+dedup for the traversal-band case
            auto first = edges_.begin() + offsets_[c];
            auto last = edges_.begin() + offsets_[c + 1];
            std::sort(first, last);
        }
        // Reference winding per cell row by scanline at the reference heights.
        // Reference points use irrational cell offsets so axis-aligned test
        // shapes do not land on them.  Edges are bucketed by the rows whose
        // reference height falls inside their y-range, so each row only sees
        // its own candidates.
        std::vector<std::vector<std::int32_t>> row_edges(static_cast<std::size_t>(n_));
        for (std::size_t e = 0; e < ne; ++e) {
            const double ylo = std::min(vs[e].y, vs[e + 1].y);
            const double yhi = std::max(vs[e].y, vs[e + 1].y);
            int j0 = static_cast<int>(std::ceil((ylo - y0_) / h_ - kRefOffY));
            int j1 = static_cast<int>(std::floor((yhi - y0_) / h_ - kRefOffY));
            j0 = std::max(j0, 0);
            j1 = std::min(j1, n_ - 1);
            for (int j = j0; j <= j1; ++j)
                row_edges[static_cast<std::size_t>(j)].push_back(static_cast<std::int32_t>(e));
        }
        ref_w_.assign(static_cast<std::size_t>(n_) * n_, 0);
        ref_suspect_.assign(static_cast<std::size_t>(n_) * n_, 0);
        std::vector<std::pair<double, int>> crossings;
        for (int cy = 0; cy < n_; ++cy) {
            const double yr = y0_ + (cy + kRefOffY) * h_;
            crossings.clear();
            for (const auto e : row_edges[static_cast<std::size_t>(cy)]) {
                const Point2 a = vs[e], b = vs[e + 1];
                const bool below_a = a.y <= yr, below_b = b.y <= yr;
                if (below_a == below_b) continue;
                const double t = (yr - a.y) / (b.y - a.y);
                crossings.push_back({a.x + t * (b.x - a.x), below_a ? +1 : -1});
            }
            std::sort(crossings.begin(), crossings.end());
            // winding at x = suffix signed count of crossings right of x
            std::size_t idx = crossings.size();
            int suffix = 0;
            for (int cx = n_ - 1; cx >= 0; --cx) {
                const double xr = x0_ + (cx + kRefOffX) * h_;
                while (idx > 0 && crossings[idx - 1].first > xr) {
                    suffix += crossings[idx - 1].second;
                    --idx;
                }
                ref_w_[static_cast<std::size_t>(cy) * n_ + cx] = suffix;
                // Crossing suspiciously close to the reference point?
                for (std::size_t j = idx; j < crossings.size() && crossings[j].first < xr + 1e-9;
                     ++j)
                    ref_suspect_[static_cast<std::size_t>(cy) * n_ + cx] = 1;
                for (std::size_t j = idx; j-- > 0 && crossings[j].first > xr - 1e-9;)
                    ref_suspect_[static_cast<std::size_t>(cy) * n_ + cx] = 1;
            }
        }
    }

    int winding_checked(Point2 p, bool& degenerate) const {
        degenerate = false;
        if (p.x < x0_ + kTol || p.x > x1_ - kTol || p.y < y0_ + kTol || p.y > y1_ - kTol)
            return 0;  // grid box strictly contains the loop
        const int cx = cell_of(p.x, x0_), cy = cell_of(p.y, y0_);
        const std::size_t c = static_cast<std::size_t>(cy) * n_ + cx;
        const auto& vs = loop_->vertices;
        const std::int64_t lo = offsets_[c], hi = offsets_[c + 1];
        // Degeneracy first: p within kTol of any edge in this cell.
        for (std::int64_t i = lo; i < hi; ++i) {
            const auto e = edges_[static_cast<std::size_t>(i)];
            if (dist2_point_segment(p, vs[e], vs[e + 1]) <= kTol * kTol) {
                degenerate = true;
                return 0;
            }
        }
        if (ref_suspect_[c]) return winding_number(*loop_, p);
        if (lo == hi) return ref_w_[c];
        const Point2 r{x0_ + (cx + kRefOffX) * h_, y0_ + (cy + kRefOffY) * h_};
        const Point2 d = p - r;
        if (norm2(d) <= kTol * kTol) return ref_w_[c];
        int delta = 0;
        const double scale = std::sqrt(norm2(d));
        for (std::int64_t i = lo; i < hi; ++i) {
            const auto e = edges_[static_cast<std::size_t>(i)];
            const Point2 a = vs[e], b = vs[e + 1];
            const double o1 = cross(d, a - r);
            const double o2 = cross(d, b - r);
            const Point2 ab = b - a;
            const double lab = std::sqrt(norm2(ab));
            const double o3 = cross(ab, r - a);
            const double o4 = cross(ab, p - a);
            const double eps_walk = kTol * scale * 8.0;
            const double eps_edge = kTol * lab * 8.0;
            if (std::abs(o1) <= eps_walk || std::abs(o2) <= eps_walk ||
                std::abs(o3) <= eps_edge || std::abs(o4) <= eps_edge) {
                // Touching configuration: decide with the exact O(n) routine.
                return winding_number(*loop_, p);
            }
            if ((o1 > 0) != (o2 > 0) && (o3 > 0) != (o4 > 0))
                delta += cross(ab, d) > 0 ? +1 : -1;
        }
        return ref_w_[c] + delta;
    }

    static constexpr double kRefOffX = 0.20710678118654752;  // (sqrt2-1)/2
    static constexpr double kRefOffY = 0.36602540378443865;  // (sqrt3-1)/2

    const PolyPath* loop_;
    double x0_ = 0, y0_ = 0, x1_ = 0, y1_ = 0, h_ = 1;
    int n_ = 0;
    std::vector<std::int64_t> offsets_;
    std::vector<std::int32_t> edges_;
    std::vector<int> ref_w_;
    std::vector<std::uint8_t> ref_suspect_;
};

struct AreaEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t hits = 0;
    std::int64_t samples = 0;
};

// Monte Carlo estimate of D_k = Area{z : |theta(z, loop)| > k} by uniform
// sampling in the disk of region_radius.  Points landing on the loop are
// resampled.
inline AreaEstimate winding_area_estimate(const PolyPath& loop, int k,
                                          std::int64_t samples, double region_radius,
                                          Philox& rng) {
    if (k < 0 || samples < 1)
        throw std::invalid_argument("winding_area_estimate: need k >= 0, samples >= 1");
    const WindingIndex index(loop);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        int w = 0;
        for (;;) {
            const auto xy = disk_point(rng, region_radius);
            if (index.try_winding({xy[0], xy[1]}, w)) break;
        }
        if (std::abs(w) > k) ++hits;
    }
    const double area = kPi * region_radius * region_radius;
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    AreaEstimate est;
    est.value = area * frac;
    est.std_error = area * std::sqrt(std::max(frac * (1.0 - frac), 0.0) /
                                     static_cast<double>(samples));
    est.hits = hits;
    est.samples = samples;
    return est;
}

}  // namespace looplab
