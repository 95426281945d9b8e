#include "ttess/line_pattern.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ttess {

int LinePattern::find(const Line& line, const Tolerance& tol) const {
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (same_line(lines[i], line, tol)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

LinePattern sample_poisson_lines(const Polygon& domain, double intensity, Rng& rng) {
    if (!(intensity >= 0.0)) {
        throw std::invalid_argument("sample_poisson_lines: negative intensity");
    }
    LinePattern pattern;
    pattern.domain = domain;
    const double mean = intensity * haar_mass_hitting(domain);
    const auto k = mean > 0.0 ? std::poisson_distribution<long>(mean)(rng) : 0L;
    pattern.lines.reserve(static_cast<std::size_t>(k));
    for (long i = 0; i < k; ++i) {
        pattern.lines.push_back(sample_line_hitting(domain, rng));
    }
    return pattern;
}

void write_pattern(std::ostream& out, const LinePattern& pattern) {
    const auto old = out.precision(17);
    out << "lines " << pattern.lines.size() << '\n';
    for (const auto& l : pattern.lines) {
        out << l.theta << ' ' << l.p << '\n';
    }
    out.precision(old);
}

std::vector<Line> read_pattern_lines(std::istream& in) {
    std::string tag;
    std::size_t k = 0;
    if (!(in >> tag >> k) || tag != "lines") {
        throw std::runtime_error("read_pattern_lines: expected 'lines <k>' header");
    }
    std::vector<Line> lines(k);
    for (auto& l : lines) {
        if (!(in >> l.theta >> l.p)) {
            throw std::runtime_error("read_pattern_lines: truncated line list");
        }
    }
    return lines;
}

}  // namespace ttess
