#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ttess/geom.hpp"

namespace ttess {

/// A finite set of lines hitting a bounded convex domain.
struct LinePattern {
    std::vector<Line> lines;
    Polygon domain;

    std::size_t size() const { return lines.size(); }
    bool empty() const { return lines.empty(); }
    /// Index of a line of the pattern equal to `line` within tolerance, or -1.
    int find(const Line& line, const Tolerance& tol) const;
};

/// Poisson line process of the given linear intensity restricted to a convex domain:
/// the count is Poisson(intensity * perimeter / pi) and lines are i.i.d. uniform
/// isotropic among lines hitting the domain.
LinePattern sample_poisson_lines(const Polygon& domain, double intensity, Rng& rng);

/// Plain-text pattern format:
///
///     lines <k>
///     <theta> <p>      (k rows)
void write_pattern(std::ostream& out, const LinePattern& pattern);
std::vector<Line> read_pattern_lines(std::istream& in);

}  // namespace ttess
