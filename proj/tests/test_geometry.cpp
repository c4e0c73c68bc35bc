#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "looplab/geometry.hpp"
#include "looplab/rng.hpp"

using namespace looplab;

namespace {

PolyPath circle_loop(Point2 c, double r, int segments, bool ccw, int laps = 1,
                     double phase = 0.0) {
    std::vector<Point2> vs;
    const int total = segments * laps;
    for (int i = 0; i <= total; ++i) {
        const double a = phase + (ccw ? 1.0 : -1.0) * 2.0 * kPi * i / segments;
        vs.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    vs.back() = vs.front();  // exact closure
    return make_path(vs);
}

PolyPath random_polygon(Philox& g, int nv, double span) {
    std::vector<Point2> vs;
    for (int i = 0; i < nv; ++i)
        vs.push_back({uniform_range(g, -span, span), uniform_range(g, -span, span)});
    vs.push_back(vs.front());
    return make_path(vs);
}

PolyPath brownian_loop(Philox& g, int n) {
    std::vector<Point2> vs{{0.0, 0.0}};
    const double step = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        vs.push_back(vs.back() + Point2{step * normal01(g), step * normal01(g)});
    PolyPath path = make_path(vs);
    return close_loop(path);
}

}  // namespace

TEST_CASE("close_loop basic shapes") {
    PolyPath tri = make_path({{0, 0}, {1, 0}, {0.5, 1}});
    PolyPath closed = close_loop(tri);
    CHECK(closed.closed);
    CHECK(closed.vertices.size() == 4);
    CHECK(closed.vertices.back() == closed.vertices.front());
    CHECK(closed.times.front() == 0.0);
    CHECK(closed.times.back() == 1.0);
    CHECK_THROWS_AS(close_loop(closed), std::invalid_argument);

    PolyPath two = make_path({{0, 0}, {1, 0}});
    PolyPath back_forth = close_loop(two);
    CHECK(back_forth.vertices.size() == 3);
    CHECK(winding_number(back_forth, {0.5, 0.5}) == 0);
}

TEST_CASE("close_loop vertex bookkeeping at scale") {
    Philox g(11, 0);
    std::vector<Point2> vs{{0.0, 0.0}};
    const int n = 100000;
    const double step = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        vs.push_back(vs.back() + Point2{step * normal01(g), step * normal01(g)});
    PolyPath loop = close_loop(make_path(vs));
    CHECK(loop.edge_count() == static_cast<std::size_t>(n) + 1);
    CHECK(loop.vertices.size() == static_cast<std::size_t>(n) + 2);
}

TEST_CASE("winding_number circle examples") {
    PolyPath ccw = circle_loop({0, 0}, 2.0, 64, true);
    CHECK(winding_number(ccw, {1, 0}) == 1);
    CHECK(winding_number(ccw, {3, 0}) == 0);
    PolyPath cw2 = circle_loop({0, 0}, 2.0, 64, false, 2);
    CHECK(winding_number(cw2, {1, 0}) == -2);
    CHECK(winding_number(cw2, {3, 0}) == 0);
}

TEST_CASE("winding_number rejects points on the loop") {
    PolyPath sq = make_path({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
    CHECK_THROWS_AS(winding_number(sq, {1.0, 0.0}), DegeneracyError);
    CHECK_THROWS_AS(winding_number(sq, {1.0 + 1e-13, 0.0}), DegeneracyError);
    CHECK(winding_number(sq, {0.0, 0.0}) == 1);
}

TEST_CASE("winding_number invariances") {
    Philox g(12, 0);
    for (int trial = 0; trial < 50; ++trial) {
        PolyPath loop = random_polygon(g, 12, 2.0);
        Point2 p{uniform_range(g, -2.5, 2.5), uniform_range(g, -2.5, 2.5)};
        int w;
        try {
            w = winding_number(loop, p);
        } catch (const DegeneracyError&) {
            continue;
        }
        // reversal
        CHECK(winding_number(reverse_path(loop), p) == -w);
        // reparametrization: squash the times
        PolyPath repar = loop;
        for (std::size_t i = 0; i < repar.times.size(); ++i) {
            const double t = repar.times[i];
            repar.times[i] = t * t * 0.5 + 0.5 * t;
        }
        CHECK(winding_number(repar, p) == w);
        // cyclic rotation of the vertex list
        const std::size_t k = 1 + static_cast<std::size_t>(uniform01(g) * (loop.vertices.size() - 2));
        std::vector<Point2> rot;
        for (std::size_t i = k; i + 1 < loop.vertices.size(); ++i) rot.push_back(loop.vertices[i]);
        for (std::size_t i = 0; i <= k; ++i) rot.push_back(loop.vertices[i]);
        CHECK(winding_number(make_path(rot), p) == w);
    }
}

TEST_CASE("ray-crossing and angle-summation agree on random pairs") {
    Philox g(13, 0);
    int checked = 0;
    while (checked < 10000) {
        PolyPath loop = random_polygon(g, 3 + static_cast<int>(uniform01(g) * 14), 2.0);
        for (int j = 0; j < 20 && checked < 10000; ++j) {
            Point2 p{uniform_range(g, -2.5, 2.5), uniform_range(g, -2.5, 2.5)};
            try {
                REQUIRE(winding_number(loop, p) == winding_number_angle_sum(loop, p));
                ++checked;
            } catch (const DegeneracyError&) {
            }
        }
    }
}

TEST_CASE("half_turn_count spec traces") {
    // Path on the origin side of the line through p: never reaches it.
    PolyPath stay = make_path({{0, 0}, {0.5, 0.3}, {-1.0, 0.2}});
    CHECK(half_turn_count(stay, {1, 0}) == 1);

    // d1 = upper half of {x=1}: hits d1 once, then d2 once.
    PolyPath trace = make_path({{0, 0}, {2, 2}, {2, -2}, {0, -2}});
    CHECK(half_turn_count(trace, {1, 0}) == 3);

    // Full CCW circle around p=(2,0) starting on d1: t1=0, t2, t3 realized.
    PolyPath circ = circle_loop({2, 0}, 1.0, 64, true, 1, kPi / 2.0);
    CHECK(half_turn_count(circ, {2, 0}) == 4);
}

TEST_CASE("half_turn_count degeneracies and errors") {
    PolyPath path = make_path({{0, 0}, {2, 0.5}});
    CHECK_THROWS_AS(half_turn_count(path, {0, 0}), std::invalid_argument);
    // Segment passing exactly through p.
    PolyPath through = make_path({{0, 0}, {2, 0}});
    CHECK_THROWS_AS(half_turn_count(through, {1, 0}), DegeneracyError);
    // Segment lying along the reference line.
    PolyPath along = make_path({{0, 0}, {1, 1}, {1, 2}});
    CHECK_THROWS_AS(half_turn_count(along, {1, 0}), DegeneracyError);
}

TEST_CASE("half_turn_count monotone under path extension") {
    Philox g(14, 0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Point2> vs{{0.0, 0.0}};
        for (int i = 0; i < 50; ++i)
            vs.push_back(vs.back() + Point2{0.2 * normal01(g), 0.2 * normal01(g)});
        Point2 p{uniform_range(g, 0.3, 1.5), uniform_range(g, -1.0, 1.0)};
        int prev = 0;
        bool ok = true;
        try {
            for (std::size_t len = 2; len <= vs.size(); ++len) {
                std::vector<Point2> prefix(vs.begin(), vs.begin() + len);
                const int c = half_turn_count(make_path(prefix), p);
                if (c < prev) ok = false;
                prev = c;
            }
        } catch (const DegeneracyError&) {
            continue;
        }
        CHECK(ok);
    }
}

TEST_CASE("winding forces alternating half-line hits") {
    Philox g(15, 0);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 100; ++trial) {
        PolyPath loop = brownian_loop(g, 256);
        Point2 p{uniform_range(g, -1.0, 1.0), uniform_range(g, -1.0, 1.0)};
        if (norm(p) < 0.05) continue;
        try {
            const int w = winding_number(loop, p);
            const int h = half_turn_count(loop, p);
            CHECK(2 * std::abs(w) <= h + 2);
            ++checked;
        } catch (const DegeneracyError&) {
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("min_spacing examples and oracle") {
    CHECK(min_spacing(make_puncture_set({{1, 0}, {0, 2}})) == 1.0);
    CHECK(min_spacing(make_puncture_set({{3, 0}, {3, 0.5}})) == 0.5);

    Philox g(16, 0);
    std::vector<Point2> pts;
    for (int i = 0; i < 10000; ++i) {
        const auto xy = disk_point(g, 1.0);
        pts.push_back({xy[0], xy[1]});
    }
    PunctureSet ps;
    ps.points = pts;  // skip validation; spacing accepts arbitrary sets
    CHECK(min_spacing(ps) == min_spacing_brute(ps));
}

TEST_CASE("puncture set invariant checks") {
    CHECK_THROWS_AS(make_puncture_set({{0, 0}, {1, 0}}), DegeneracyError);
    CHECK_THROWS_AS(make_puncture_set({{1, 0}, {2, 0}}), DegeneracyError);        // same ray
    CHECK_THROWS_AS(make_puncture_set({{1, 0}, {-2, 0}}), DegeneracyError);       // opposite ray
    CHECK_THROWS_AS(make_puncture_set({{1, 0}, {0, 1}}), DegeneracyError);        // equal norms
    const PunctureSet ok = make_puncture_set({{0, 2}, {1, 0.01}, {-1.5, 0.6}});
    CHECK(ok.points.size() == 3);
    CHECK(norm(ok.points[0]) < norm(ok.points[1]));
    CHECK(norm(ok.points[1]) < norm(ok.points[2]));
}

TEST_CASE("winding index equals direct winding") {
    Philox g(17, 0);
    PolyPath loop = brownian_loop(g, 4000);
    WindingIndex index(loop);
    int agreements = 0;
    for (int i = 0; i < 20000; ++i) {
        Point2 p{uniform_range(g, -2.0, 2.0), uniform_range(g, -2.0, 2.0)};
        int wi;
        const bool ok_i = index.try_winding(p, wi);
        try {
            const int wd = winding_number(loop, p);
            REQUIRE(ok_i);
            REQUIRE(wi == wd);
            ++agreements;
        } catch (const DegeneracyError&) {
            REQUIRE_FALSE(ok_i);
        }
    }
    CHECK(agreements > 19000);

    // Axis-aligned polygon: exercises the fallback paths.
    PolyPath sq = make_path({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}});
    WindingIndex sq_index(sq, 37);
    for (int i = 0; i < 4000; ++i) {
        Point2 p{uniform_range(g, -1.6, 1.6), uniform_range(g, -1.6, 1.6)};
        int wi;
        if (!sq_index.try_winding(p, wi)) continue;
        CHECK(wi == winding_number(sq, p));
    }
}

TEST_CASE("winding_area_estimate on the unit circle") {
    PolyPath circ = circle_loop({0, 0}, 1.0, 256, true);
    Philox g(18, 0);
    const auto est0 = winding_area_estimate(circ, 0, 40000, 1.5, g);
    CHECK(std::abs(est0.value - kPi) <= 3.0 * est0.std_error + 0.01);
    const auto est1 = winding_area_estimate(circ, 1, 20000, 1.5, g);
    CHECK(est1.value == 0.0);
}
