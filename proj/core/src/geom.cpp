#include "ttess/geom.hpp"

#include <algorithm>
#include <limits>

namespace ttess {

Tolerance Tolerance::for_diameter(double diameter) {
    Tolerance tol;
    tol.eps_len = 1e-9 * diameter;
    tol.eps_ang = 1e-9;
    return tol;
}

Line line_through(Point a, Point b) {
    const Point d = b - a;
    const double len = norm(d);
    if (!(len > 0.0)) {
        throw GeometryError("line_through: coincident points");
    }
    double theta = std::atan2(d.y, d.x);
    if (theta < 0.0) {
        theta += kPi;
    }
    if (theta >= kPi) {
        theta -= kPi;
    }
    Line line{theta, 0.0};
    // Average both points so the line is symmetric in its defining pair.
    line.p = 0.5 * (dot(line.normal(), a) + dot(line.normal(), b));
    return line;
}

bool line_less(const Line& a, const Line& b) {
    if (a.theta != b.theta) {
        return a.theta < b.theta;
    }
    return a.p < b.p;
}

std::optional<Point> intersect(const Line& a, const Line& b) {
    const Line& l1 = line_less(a, b) ? a : b;
    const Line& l2 = line_less(a, b) ? b : a;
    const Point n1 = l1.normal();
    const Point n2 = l2.normal();
    const double det = cross(n1, n2);
    if (std::abs(det) < 1e-15) {
        return std::nullopt;
    }
    return Point{(l1.p * n2.y - l2.p * n1.y) / det, (n1.x * l2.p - n2.x * l1.p) / det};
}

bool same_line(const Line& a, const Line& b, const Tolerance& tol) {
    double dtheta = std::abs(a.theta - b.theta);
    double bp = b.p;
    if (dtheta > kPi / 2) {
        // Angles near 0 and near pi describe almost the same direction with the normal flipped.
        dtheta = kPi - dtheta;
        bp = -bp;
    }
    return dtheta <= tol.eps_ang && std::abs(a.p - bp) <= tol.eps_len;
}

double signed_area(std::span<const Point> poly) {
    const std::size_t n = poly.size();
    if (n < 3) {
        return 0.0;
    }
    // Shoelace relative to the first vertex limits cancellation.
    double s = 0.0;
    const Point o = poly[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        s += cross(poly[i] - o, poly[i + 1] - o);
    }
    return 0.5 * s;
}

double perimeter(std::span<const Point> poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += distance(poly[i], poly[(i + 1) % n]);
    }
    return s;
}

double diameter(std::span<const Point> poly) {
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        for (std::size_t j = i + 1; j < poly.size(); ++j) {
            d = std::max(d, distance(poly[i], poly[j]));
        }
    }
    return d;
}

void require_convex_ccw(std::span<const Point> poly, const Tolerance& tol) {
    const std::size_t n = poly.size();
    if (n < 3) {
        throw GeometryError("polygon needs at least 3 vertices");
    }
    for (const Point& q : poly) {
        if (!std::isfinite(q.x) || !std::isfinite(q.y)) {
            throw GeometryError("polygon has non-finite coordinates");
        }
    }
    if (signed_area(poly) <= tol.eps_len * tol.eps_len) {
        throw GeometryError("polygon is degenerate or clockwise");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        const Point c = poly[(i + 2) % n];
        if (distance(a, b) <= tol.eps_len) {
            throw GeometryError("polygon has a zero-length side");
        }
        const double turn = cross(b - a, c - b) / norm(b - a);
        if (turn <= tol.eps_len) {
            throw GeometryError("polygon is not strictly convex");
        }
    }
}

Polygon make_ccw(Polygon poly) {
    if (signed_area(poly) < 0.0) {
        std::reverse(poly.begin(), poly.end());
    }
    return poly;
}

Polygon unit_square() { return square(1.0); }

Polygon square(double side) {
    if (!(side > 0.0)) {
        throw GeometryError("square side must be positive");
    }
    return {{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}};
}

double haar_mass_hitting(std::span<const Point> poly) {
    require_convex_ccw(poly, Tolerance::for_diameter(diameter(poly)));
    return perimeter(poly) / kPi;
}

std::pair<double, double> support_interval(std::span<const Point> poly, double theta) {
    const Point n{-std::sin(theta), std::cos(theta)};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Point& q : poly) {
        const double s = dot(n, q);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

std::optional<std::pair<Point, Point>> chord(const Line& line, std::span<const Point> poly,
                                             const Tolerance& tol) {
    const std::size_t n = poly.size();
    std::vector<Point> hits;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        const double sa = line.signed_distance(a);
        const double sb = line.signed_distance(b);
        if (std::abs(sa) <= tol.eps_len) {
            hits.push_back(a);
            continue;
        }
        if ((sa < 0.0) != (sb < 0.0) && std::abs(sb) > tol.eps_len) {
            const double t = sa / (sa - sb);
            hits.push_back(a + (b - a) * t);
        }
    }
    if (hits.size() < 2) {
        return std::nullopt;
    }
    // Order by the coordinate along the line; the extreme hits bound the chord.
    auto by_param = [&](Point u, Point v) { return line.param(u) < line.param(v); };
    const auto [lo, hi] = std::minmax_element(hits.begin(), hits.end(), by_param);
    if (distance(*lo, *hi) <= tol.eps_len) {
        return std::nullopt;
    }
    return std::make_pair(*lo, *hi);
}

double acute_angle(Point dir1, Point dir2) {
    if (norm(dir1) == 0.0 || norm(dir2) == 0.0) {
        throw GeometryError("acute_angle: zero direction");
    }
    return std::atan2(std::abs(cross(dir1, dir2)), std::abs(dot(dir1, dir2)));
}

double acute_angle(const Line& a, const Line& b) {
    return acute_angle(a.direction(), b.direction());
}

bool collinear(Point a, Point b, Point c, const Tolerance& tol) {
    const double len = distance(a, b);
    if (len <= tol.eps_len) {
        throw GeometryError("collinear: reference points coincide");
    }
    return std::abs(cross(b - a, c - a)) / len <= tol.eps_len;
}

Line sample_line_hitting(std::span<const Point> poly, Rng& rng) {
    // Rejection from the lines hitting a bounding disc: uniform theta and uniform
    // offset there is exactly the invariant measure, and restriction keeps it so.
    double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
    for (const Point& q : poly) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    }
    const Point center{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    double radius = 0.0;
    for (const Point& q : poly) {
        radius = std::max(radius, distance(q, center));
    }
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::uniform_real_distribution<double> offset(-radius, radius);
    for (;;) {
        const double theta = angle(rng);
        const Line probe{theta, 0.0};
        const double p = dot(probe.normal(), center) + offset(rng);
        const auto [lo, hi] = support_interval(poly, theta);
        if (p > lo && p < hi) {
            return Line{theta, p};
        }
    }
}

}  // namespace ttess
