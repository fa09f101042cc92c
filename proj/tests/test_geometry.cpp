#include "mprox/geometry.hpp"
#include "mprox/rng.hpp"

#include <doctest.h>

using namespace mprox;

namespace {

// Independent intersection oracle built from orientation tests: the segment
// meets the rectangle iff an endpoint lies inside or it properly crosses one
// of the four edges. No clipping involved, so it shares no code path with the
// Liang-Barsky implementation under test.
double orient(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    return orient(a, b, p) == 0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
        o4 != 0) {
        return true;
    }
    return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

bool oracle(const Point& a, const Point& b, const Rect& r) {
    if (r.contains(a) || r.contains(b)) {
        return true;
    }
    const Point c1{r.x_min, r.y_min}, c2{r.x_max, r.y_min};
    const Point c3{r.x_max, r.y_max}, c4{r.x_min, r.y_max};
    return segments_meet(a, b, c1, c2) || segments_meet(a, b, c2, c3) ||
           segments_meet(a, b, c3, c4) || segments_meet(a, b, c4, c1);
}

} // namespace

TEST_CASE("rect basics") {
    const Rect r{1, 2, 5, 8};
    CHECK(r.width() == 4);
    CHECK(r.height() == 6);
    CHECK(r.contains(Point{1, 2}));
    CHECK(r.contains(Point{3, 5}));
    CHECK_FALSE(r.contains(Point{0.99, 5}));
    CHECK_FALSE(r.contains(Point{3, 8.01}));
}

TEST_CASE("segment-rect hand cases") {
    const Rect r{10, 10, 20, 20};
    CHECK(segment_intersects_rect({0, 15}, {30, 15}, r));   // straight through
    CHECK(segment_intersects_rect({12, 12}, {18, 18}, r));  // fully inside
    CHECK(segment_intersects_rect({0, 0}, {15, 15}, r));    // one endpoint inside
    CHECK(segment_intersects_rect({0, 10}, {30, 10}, r));   // along the bottom edge
    CHECK(segment_intersects_rect({10, 0}, {10, 30}, r));   // along the left edge
    CHECK(segment_intersects_rect({0, 20}, {20, 0}, r));    // touches corner diagonal
    CHECK_FALSE(segment_intersects_rect({0, 0}, {9, 9}, r));
    CHECK_FALSE(segment_intersects_rect({0, 25}, {30, 25}, r)); // passes above
    CHECK_FALSE(segment_intersects_rect({0, 21}, {30, 30}, r));
    CHECK_FALSE(segment_intersects_rect({25, 0}, {25, 30}, r)); // passes right
}

TEST_CASE("vertical and horizontal segments") {
    const Rect r{10, 10, 20, 20};
    CHECK(segment_intersects_rect({15, 0}, {15, 30}, r));
    CHECK(segment_intersects_rect({15, 0}, {15, 10}, r)); // stops on the edge
    CHECK_FALSE(segment_intersects_rect({15, 0}, {15, 9.9}, r));
    CHECK(segment_intersects_rect({0, 15}, {10, 15}, r));
    CHECK_FALSE(segment_intersects_rect({0, 15}, {9.9, 15}, r));
}

TEST_CASE("degenerate segment is a point test") {
    const Rect r{10, 10, 20, 20};
    CHECK(segment_intersects_rect({15, 15}, {15, 15}, r));
    CHECK_FALSE(segment_intersects_rect({5, 5}, {5, 5}, r));
}

TEST_CASE("matches the orientation oracle on random cases") {
    RngStream rng(2024, "geometry-cases");
    int hits = 0;
    for (int i = 0; i < 5000; ++i) {
        const Point a{rng.uniform(-50, 100), rng.uniform(-50, 150)};
        const Point b{rng.uniform(-50, 100), rng.uniform(-50, 150)};
        const double x = rng.uniform(0, 50), y = rng.uniform(0, 100);
        const Rect r{x, y, x + rng.uniform(1, 30), y + rng.uniform(1, 40)};
        const bool want = oracle(a, b, r);
        CHECK_MESSAGE(segment_intersects_rect(a, b, r) == want,
                      "case ", i, ": (", a.x, ",", a.y, ")-(", b.x, ",", b.y, ") vs [", r.x_min,
                      ",", r.y_min, ",", r.x_max, ",", r.y_max, "]");
        hits += want;
    }
    CHECK(hits > 500); // the sample actually exercises both outcomes
    CHECK(hits < 4500);
}
