#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ttess {

inline constexpr double kPi = 3.14159265358979323846;

using Rng = std::mt19937_64;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
    friend Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
    friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Length and angle tolerances governing every geometric predicate.
struct Tolerance {
    double eps_len = 1e-9;
    double eps_ang = 1e-9;

    /// Default policy: eps_len scales with the diameter of the domain.
    static Tolerance for_diameter(double diameter);
};

/// A line {x : n(theta) . x = p} where n(theta) = (-sin theta, cos theta) is the
/// unit normal and (cos theta, sin theta) the direction; theta lies in [0, pi).
///
/// The invariant measure on lines used throughout is dl = (1/pi) dtheta dp, which
/// gives lines hitting a convex set K total mass perimeter(K) / pi.
struct Line {
    double theta = 0.0;
    double p = 0.0;

    Point direction() const { return {std::cos(theta), std::sin(theta)}; }
    Point normal() const { return {-std::sin(theta), std::cos(theta)}; }
    /// Signed distance of q to the line (positive on the normal side).
    double signed_distance(Point q) const { return dot(normal(), q) - p; }
    /// Coordinate of q along the line direction.
    double param(Point q) const { return dot(direction(), q); }
    Point at(double t) const { return normal() * p + direction() * t; }

    friend bool operator==(const Line&, const Line&) = default;
};

/// Builds the normalized line through two distinct points.
Line line_through(Point a, Point b);

/// Intersection of two non-parallel lines. The result does not depend on the
/// argument order (bitwise), so vertices defined by a pair of lines are stable.
std::optional<Point> intersect(const Line& a, const Line& b);

/// True when the two lines coincide within tolerance.
bool same_line(const Line& a, const Line& b, const Tolerance& tol);

/// Total order on lines by (theta, p); used for canonical output.
bool line_less(const Line& a, const Line& b);

using Polygon = std::vector<Point>;

double signed_area(std::span<const Point> poly);
double perimeter(std::span<const Point> poly);
double diameter(std::span<const Point> poly);

/// Checks that poly is a simple, counter-clockwise, strictly convex polygon with
/// positive area. Throws GeometryError otherwise.
void require_convex_ccw(std::span<const Point> poly, const Tolerance& tol);

/// Returns the polygon with counter-clockwise orientation.
Polygon make_ccw(Polygon poly);

Polygon unit_square();
Polygon square(double side);

/// Scaled Haar mass of the lines hitting a convex polygon: perimeter / pi.
double haar_mass_hitting(std::span<const Point> poly);

/// Projection interval [min, max] of the polygon onto the normal of direction theta.
std::pair<double, double> support_interval(std::span<const Point> poly, double theta);

/// Intersection of a line with a convex polygon, when it has positive length.
std::optional<std::pair<Point, Point>> chord(const Line& line, std::span<const Point> poly,
                                             const Tolerance& tol = {});

/// Acute angle in [0, pi/2] between two undirected directions.
double acute_angle(Point dir1, Point dir2);
double acute_angle(const Line& a, const Line& b);

/// Perpendicular distance of c to line(a, b) is at most eps_len.
bool collinear(Point a, Point b, Point c, const Tolerance& tol);

/// Draws a line from the invariant measure restricted to lines hitting the
/// convex polygon (uniform and isotropic).
Line sample_line_hitting(std::span<const Point> poly, Rng& rng);

}  // namespace ttess
