#ifndef MPROX_GEOMETRY_HPP
#define MPROX_GEOMETRY_HPP

namespace mprox {

struct Point {
    double x = 0;
    double y = 0;
};

/// Axis-aligned rectangle, x_min <= x_max and y_min <= y_max.
struct Rect {
    double x_min = 0;
    double y_min = 0;
    double x_max = 0;
    double y_max = 0;

    bool contains(const Point& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

/// True iff the closed segment a-b meets the rectangle (Liang-Barsky clip).
bool segment_intersects_rect(const Point& a, const Point& b, const Rect& r);

} // namespace mprox

#endif
