#include "ttess/tessellation_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace ttess {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void expect(std::istream& in, const std::string& word) {
    std::string got;
    if (!(in >> got) || got != word) {
        throw FormatError("tessellation: expected '" + word + "', got '" + got + "'");
    }
}

}  // namespace

void write_tessellation(std::ostream& out, const TTessellation& t) {
    out << "ttess 1\n";
    out << "domain " << t.domain().size() << '\n';
    for (const Point& p : t.domain()) {
        out << num(p.x) << ' ' << num(p.y) << '\n';
    }
    auto ids = t.internal_segments();
    std::sort(ids.begin(), ids.end(), [&](SegmentId a, SegmentId b) {
        const Line& la = t.segment(a).line;
        const Line& lb = t.segment(b).line;
        return line_less(la, lb);
    });
    out << "segments " << ids.size() << '\n';
    for (SegmentId s : ids) {
        const auto& seg = t.segment(s);
        const Point a = t.vertex(seg.verts.front()).pos;
        const Point b = t.vertex(seg.verts.back()).pos;
        out << num(seg.line.theta) << ' ' << num(seg.line.p) << ' ' << num(a.x) << ' ' << num(a.y) << ' ' << num(b.x)
            << ' ' << num(b.y) << ' ' << seg.verts.size() - 2;
        for (std::size_t k = 1; k + 1 < seg.verts.size(); ++k) {
            const Point q = t.vertex(seg.verts[k]).pos;
            out << ' ' << num(q.x) << ' ' << num(q.y);
        }
        out << '\n';
    }
}

TTessellation read_tessellation(std::istream& in) {
    expect(in, "ttess");
    int version = 0;
    if (!(in >> version) || version != 1) {
        throw FormatError("tessellation: unsupported version");
    }
    expect(in, "domain");
    std::size_t n = 0;
    if (!(in >> n) || n < 3) {
        throw FormatError("tessellation: bad domain size");
    }
    Polygon dom(n);
    for (auto& p : dom) {
        if (!(in >> p.x >> p.y)) {
            throw FormatError("tessellation: truncated domain");
        }
    }
    expect(in, "segments");
    std::size_t k = 0;
    if (!(in >> k)) {
        throw FormatError("tessellation: bad segment count");
    }
    std::vector<TTessellation::SegmentSpec> specs(k);
    std::vector<std::size_t> interior(k);
    for (std::size_t i = 0; i < k; ++i) {
        auto& s = specs[i];
        if (!(in >> s.line.theta >> s.line.p >> s.a.x >> s.a.y >> s.b.x >> s.b.y >> interior[i])) {
            throw FormatError("tessellation: malformed segment row " + std::to_string(i + 1));
        }
        for (std::size_t m = 0; m < interior[i]; ++m) {
            double x = 0.0, y = 0.0;
            if (!(in >> x >> y)) {
                throw FormatError("tessellation: truncated subdivision points in row " + std::to_string(i + 1));
            }
        }
    }
    TTessellation t = [&] {
        try {
            return TTessellation::from_segments(dom, specs);
        } catch (const GeometryError& e) {
            throw FormatError(std::string("tessellation: inconsistent geometry: ") + e.what());
        }
    }();
    // The subdivision points are implied by the segments; check they agree.
    std::vector<std::size_t> got;
    for (SegmentId s : t.internal_segments()) {
        got.push_back(t.segment(s).verts.size() - 2);
    }
    std::vector<std::size_t> want = interior;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
        throw FormatError("tessellation: subdivision points disagree with the segment layout");
    }
    return t;
}

}  // namespace ttess
