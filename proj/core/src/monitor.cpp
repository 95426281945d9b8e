#include "ttess/monitor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ttess {

namespace {

std::string fmt(double x, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

}  // namespace

TraceRecord make_trace_record(const Chain& chain) {
    return {chain.iteration(), chain.energy(), chain.counts()};
}

TraceRow to_row(const TraceRecord& r) {
    return {r.iteration, r.energy, r.counts.rate(UpdateKind::split), r.counts.rate(UpdateKind::merge),
            r.counts.rate(UpdateKind::flip)};
}

// --- Lorenz ------------------------------------------------------------------

LorenzCurve lorenz_curve(std::vector<double> areas) {
    if (areas.empty()) {
        throw std::invalid_argument("lorenz_curve: no areas");
    }
    for (double a : areas) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("lorenz_curve: areas must be positive");
        }
    }
    std::sort(areas.begin(), areas.end());
    const double total = std::accumulate(areas.begin(), areas.end(), 0.0);
    const double n = static_cast<double>(areas.size());
    LorenzCurve out;
    double run = 0.0;
    for (std::size_t i = 0; i < areas.size(); ++i) {
        run += areas[i];
        out.emplace_back(static_cast<double>(i + 1) / n, run / total);
    }
    out.back() = {1.0, 1.0};
    return out;
}

double lorenz_at(const LorenzCurve& curve, double x) {
    double x0 = 0.0;
    double y0 = 0.0;
    for (const auto& [x1, y1] : curve) {
        if (x <= x1) {
            return x1 == x0 ? y1 : y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
        x0 = x1;
        y0 = y1;
    }
    return 1.0;
}

LorenzCurve lorenz_reference(const LorenzCurve& curve) {
    LorenzCurve out;
    for (const auto& pt : curve) {
        out.emplace_back(pt.first, pt.first * pt.first);
    }
    return out;
}

// --- survival --------------------------------------------------------------------

namespace {

template <class Snapshot, class Size, class Common>
SurvivalCurve survival_impl(const std::vector<Snapshot>& snapshots, const std::vector<std::uint64_t>& lags,
                            Size size, Common common) {
    if (snapshots.size() < 2) {
        throw std::invalid_argument("segment_survival: need at least two snapshots");
    }
    SurvivalCurve out;
    for (std::uint64_t lag : lags) {
        if (lag >= snapshots.size()) {
            throw std::invalid_argument("segment_survival: lag exceeds the snapshot range");
        }
        double sum = 0.0;
        std::size_t terms = 0;
        for (std::size_t t = 0; t + lag < snapshots.size(); ++t) {
            const std::size_t n = size(snapshots[t]);
            if (n == 0) {
                continue;
            }
            sum += static_cast<double>(common(snapshots[t], snapshots[t + lag])) / static_cast<double>(n);
            ++terms;
        }
        out.lags.push_back(lag);
        out.fraction.push_back(terms == 0 ? 0.0 : sum / static_cast<double>(terms));
    }
    return out;
}

}  // namespace

SurvivalCurve segment_survival(const std::vector<SegmentSet>& snapshots, const std::vector<std::uint64_t>& lags,
                               SegmentIdentity identity, double tol) {
    const int fields = identity == SegmentIdentity::geometry ? 4 : 2;
    auto same = [&](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        for (int k = 0; k < fields; ++k) {
            if (std::abs(a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]) > tol) {
                return false;
            }
        }
        return true;
    };
    return survival_impl(
        snapshots, lags, [](const SegmentSet& s) { return s.size(); },
        [&](const SegmentSet& a, const SegmentSet& b) {
            std::size_t c = 0;
            for (const auto& x : a) {
                c += std::any_of(b.begin(), b.end(), [&](const auto& y) { return same(x, y); }) ? 1 : 0;
            }
            return c;
        });
}

SurvivalCurve segment_survival(const std::vector<LinePattern>& snapshots, const std::vector<std::uint64_t>& lags,
                               const Tolerance& tol) {
    return survival_impl(
        snapshots, lags, [](const LinePattern& p) { return p.size(); },
        [&](const LinePattern& a, const LinePattern& b) {
            std::size_t c = 0;
            for (const Line& l : a.lines) {
                c += b.find(l, tol) >= 0 ? 1 : 0;
            }
            return c;
        });
}

// --- angles ------------------------------------------------------------------------

std::uint64_t AngleHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::vector<double> AngleHistogram::cdf() const {
    std::vector<double> out;
    const double n = static_cast<double>(total());
    std::uint64_t run = 0;
    for (auto c : counts) {
        run += c;
        out.push_back(n > 0.0 ? static_cast<double>(run) / n : 0.0);
    }
    return out;
}

AngleHistogram angle_histogram(const std::vector<double>& angles, std::size_t bins) {
    if (angles.empty()) {
        throw std::invalid_argument("angle_histogram: no angles");
    }
    if (bins == 0) {
        throw std::invalid_argument("angle_histogram: zero bins");
    }
    AngleHistogram h;
    const double top = kPi / 2.0;
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges.push_back(top * static_cast<double>(i) / static_cast<double>(bins));
    }
    h.counts.assign(bins, 0);
    for (double a : angles) {
        auto k = static_cast<std::size_t>(a / top * static_cast<double>(bins));
        k = std::min(k, bins - 1);
        ++h.counts[k];
    }
    return h;
}

// --- CSV ---------------------------------------------------------------------------

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
    out << "iteration,energy,acc_split,acc_merge,acc_flip\n";
    for (const auto& r : trace) {
        out << r.iteration << ',' << fmt(r.energy) << ',' << fmt(r.acc_split) << ',' << fmt(r.acc_merge) << ','
            << fmt(r.acc_flip) << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "iteration,energy,acc_split,acc_merge,acc_flip") {
        throw IoError("trace csv: unexpected header");
    }
    std::vector<TraceRow> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        TraceRow r;
        if (!(ss >> r.iteration >> r.energy >> r.acc_split >> r.acc_merge >> r.acc_flip)) {
            throw IoError("trace csv: malformed row " + std::to_string(lineno));
        }
        out.push_back(r);
    }
    return out;
}

void write_survival_csv(std::ostream& out, const SurvivalCurve& curve) {
    out << "lag,fraction\n";
    for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        out << curve.lags[i] << ',' << fmt(curve.fraction[i]) << '\n';
    }
}

void write_lorenz_csv(std::ostream& out, const LorenzCurve& curve) {
    out << "x,y\n";
    for (const auto& [x, y] : curve) {
        out << fmt(x) << ',' << fmt(y) << '\n';
    }
}

void write_angles_csv(std::ostream& out, const AngleHistogram& hist) {
    out << "bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        out << fmt(hist.edges[i]) << ',' << fmt(hist.edges[i + 1]) << ',' << hist.counts[i] << '\n';
    }
}

// --- SVG -----------------------------------------------------------------------------

std::string render_svg(const TTessellation& t, const SvgOptions& opt) {
    const auto& dom = t.domain();
    double xmin = dom[0].x, xmax = dom[0].x, ymin = dom[0].y, ymax = dom[0].y;
    for (const Point& p : dom) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double w = xmax - xmin;
    const double h = ymax - ymin;
    const double pad = 0.02 * std::max(w, h);
    const double stroke = 0.004 * std::max(w, h);
    const double scale = opt.pixels / std::max(w, h);
    auto c = [](double v) { return fmt(v, 10); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << c((w + 2 * pad) * scale)
       << "\" height=\"" << c((h + 2 * pad) * scale) << "\" viewBox=\"" << c(xmin - pad) << ' ' << c(ymin - pad)
       << ' ' << c(w + 2 * pad) << ' ' << c(h + 2 * pad) << "\">\n";
    os << "<g transform=\"translate(0," << c(ymin + ymax) << ") scale(1,-1)\" stroke-linecap=\"round\" stroke-width=\""
       << c(stroke) << "\">\n";
    for (std::size_t i = 0; i < dom.size(); ++i) {
        const Point a = dom[i];
        const Point b = dom[(i + 1) % dom.size()];
        os << "<line class=\"boundary\" x1=\"" << c(a.x) << "\" y1=\"" << c(a.y) << "\" x2=\"" << c(b.x)
           << "\" y2=\"" << c(b.y) << "\" stroke=\"black\"/>\n";
    }
    struct Row {
        std::array<double, 4> key;
        bool blocking;
        std::vector<Point> pts;
    };
    std::vector<Row> rows;
    for (SegmentId s : t.internal_segments()) {
        const auto& seg = t.segment(s);
        Row r;
        const double a = seg.line.param(t.vertex(seg.verts.front()).pos);
        const double b = seg.line.param(t.vertex(seg.verts.back()).pos);
        r.key = {seg.line.theta, seg.line.p, std::min(a, b), std::max(a, b)};
        r.blocking = seg.edge_count() > 1;
        for (VertexId v : seg.verts) {
            r.pts.push_back(t.vertex(v).pos);
        }
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
    for (const auto& r : rows) {
        const char* color = opt.color_blocking ? (r.blocking ? "#1f4e9c" : "#c0392b") : "black";
        const char* cls = r.blocking ? "internal blocking" : "internal nonblocking";
        for (std::size_t k = 0; k + 1 < r.pts.size(); ++k) {
            os << "<line class=\"" << cls << "\" x1=\"" << c(r.pts[k].x) << "\" y1=\"" << c(r.pts[k].y)
               << "\" x2=\"" << c(r.pts[k + 1].x) << "\" y2=\"" << c(r.pts[k + 1].y) << "\" stroke=\"" << color
               << "\"/>\n";
        }
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open for writing: " + path.string());
    }
    f << text;
    if (!f) {
        throw IoError("write failed: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open for reading: " + path.string());
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace ttess
