#pragma once

#include <iosfwd>
#include <stdexcept>

#include "ttess/tessellation.hpp"

namespace ttess {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Plain-text tessellation format:
///
///     ttess 1
///     domain <n>
///     <x> <y>                                   (n rows)
///     segments <k>
///     <theta> <p> <x0> <y0> <x1> <y1> <m> <x y>*m
///
/// One row per internal segment: supporting line, end points, then the m interior
/// vertices along it. Numbers are written with 17 significant digits, so reading
/// rebuilds the same geometry up to the vertex recomputation.
void write_tessellation(std::ostream& out, const TTessellation& t);
TTessellation read_tessellation(std::istream& in);

}  // namespace ttess
