#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ttess/line_pattern.hpp"
#include "ttess/tessellation.hpp"

namespace ttess {

class EnumerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Identifies a tessellation supported by a fixed pattern: for every pattern line,
/// the indices of the two breakpoints its segment runs between. Breakpoints of a
/// line are its chord ends and its crossings with the other lines inside the
/// domain, sorted along the line.
using StateKey = std::vector<std::pair<int, int>>;

/// Breakpoint structure of a pattern in general position.
class PatternLayout {
public:
    /// Throws EnumerationError when lines coincide, miss the domain, pass within
    /// tolerance of a corner, or when two crossings coincide.
    explicit PatternLayout(LinePattern pattern, Tolerance tol = {});

    const LinePattern& pattern() const { return pattern_; }
    std::size_t size() const { return pattern_.lines.size(); }
    /// Breakpoint parameters along line i.
    const std::vector<double>& breaks(std::size_t i) const { return breaks_[i]; }
    /// Index of the other line crossing line i at breakpoint k, or -1 at a chord end.
    int crossing(std::size_t i, std::size_t k) const { return partner_[i][k]; }
    /// Breakpoint index on line j of the crossing with line i, or -1.
    int break_on(std::size_t j, std::size_t i) const;

    /// Key of t, or nullopt when t is not supported by exactly this pattern.
    std::optional<StateKey> key(const TTessellation& t) const;
    TTessellation build(const StateKey& key) const;

private:
    LinePattern pattern_;
    Tolerance tol_;
    std::vector<std::vector<double>> breaks_;
    std::vector<std::vector<int>> partner_;
};

/// All T-tessellations whose line pattern is exactly `pattern`, by depth-first
/// search over one segment per line. Sorted by key.
std::vector<TTessellation> enumerate_ttessellations(const LinePattern& pattern, std::size_t k_max = 5);
std::vector<StateKey> enumerate_keys(const PatternLayout& layout, std::size_t k_max = 5);
std::size_t nttl(const LinePattern& pattern, std::size_t k_max = 5);

struct FlipGraphReport {
    std::size_t states = 0;
    std::size_t edges = 0;      // directed flip moves between enumerated states
    bool closed = true;         // every flip lands on an enumerated state
    bool connected = true;
    std::vector<std::vector<std::size_t>> adjacency;
};

FlipGraphReport analyze_flip_graph(const PatternLayout& layout, const std::vector<StateKey>& keys);

}  // namespace ttess
