#include "ttess/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "editor.hpp"

namespace ttess {

StatsDelta StatsDelta::operator-() const {
    StatsDelta d;
    d.total_edge_length = -total_edge_length;
    d.nseint = -nseint;
    d.nnbseint = -nnbseint;
    d.nbseint = -nbseint;
    d.nveint = -nveint;
    d.sum_sq_cell_area = -sum_sq_cell_area;
    d.sum_vertex_angles = -sum_vertex_angles;
    d.sum_internal_vertex_angles = -sum_internal_vertex_angles;
    return d;
}

Stats& operator+=(Stats& s, const StatsDelta& d) {
    s.total_edge_length += d.total_edge_length;
    s.nseint += d.nseint;
    s.nnbseint += d.nnbseint;
    s.nbseint += d.nbseint;
    s.nveint += d.nveint;
    s.sum_sq_cell_area += d.sum_sq_cell_area;
    s.sum_vertex_angles += d.sum_vertex_angles;
    s.sum_internal_vertex_angles += d.sum_internal_vertex_angles;
    return s;
}

bool ValidationReport::has(const std::string& code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.code << ": " << v.detail << "\n";
    }
    return out.str();
}

// --- construction ----------------------------------------------------------

void TTessellation::init_domain(Polygon domain, const Tolerance& tol) {
    domain = make_ccw(std::move(domain));
    require_convex_ccw(domain, tol);
    domain_ = std::move(domain);
    domain_perimeter_ = perimeter(domain_);
    domain_area_ = signed_area(domain_);
    tol_ = tol;

    detail::Editor ed(*this);
    const std::size_t n = domain_.size();
    for (std::size_t i = 0; i < n; ++i) {
        ed.add_segment(line_through(domain_[i], domain_[(i + 1) % n]), true);
    }
    std::vector<VertexId> ring;
    for (std::size_t i = 0; i < n; ++i) {
        const auto prev = static_cast<SegmentId>((i + n - 1) % n);
        ring.push_back(ed.add_corner(domain_[i], prev, static_cast<SegmentId>(i)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        ed.insert_on_segment(static_cast<SegmentId>(i), ring[i]);
        ed.insert_on_segment(static_cast<SegmentId>(i), ring[(i + 1) % n]);
    }
}

TTessellation TTessellation::empty(Polygon domain) {
    const double d = diameter(domain);
    return empty(std::move(domain), Tolerance::for_diameter(d));
}

TTessellation TTessellation::empty(Polygon domain, const Tolerance& tol) {
    TTessellation t;
    t.init_domain(std::move(domain), tol);
    std::vector<VertexId> ring;
    for (VertexId v = 0; v < t.vertices_.size(); ++v) {
        ring.push_back(v);
    }
    detail::Editor(t).add_cell(std::move(ring));
    t.rebuild_indices();
    t.stats_ = t.recompute_stats();
    return t;
}

TTessellation TTessellation::from_segments(Polygon domain, std::span<const SegmentSpec> segments) {
    const double d = diameter(domain);
    return from_segments(std::move(domain), segments, Tolerance::for_diameter(d));
}

TTessellation TTessellation::from_segments(Polygon domain, std::span<const SegmentSpec> specs,
                                           const Tolerance& tol) {
    TTessellation t;
    t.init_domain(std::move(domain), tol);
    detail::Editor ed(t);
    const double eps = tol.eps_len;

    struct Extent {
        double lo, hi;
    };
    std::vector<Extent> extent(t.segments_.size());
    for (SegmentId s = 0; s < t.segments_.size(); ++s) {
        const auto& seg = t.segments_[s];
        const double a = seg.line.param(t.vertices_[seg.verts.front()].pos);
        const double b = seg.line.param(t.vertices_[seg.verts.back()].pos);
        extent[s] = {std::min(a, b), std::max(a, b)};
    }
    for (const auto& spec : specs) {
        if (distance(spec.a, spec.b) <= eps) {
            throw GeometryError("from_segments: zero-length segment");
        }
        ed.add_segment(spec.line, false);
        const double a = spec.line.param(spec.a);
        const double b = spec.line.param(spec.b);
        if (std::abs(spec.line.signed_distance(spec.a)) > 1e3 * eps ||
            std::abs(spec.line.signed_distance(spec.b)) > 1e3 * eps) {
            throw GeometryError("from_segments: end point off its supporting line");
        }
        extent.push_back({std::min(a, b), std::max(a, b)});
    }

    const std::size_t nsides = t.domain_.size();
    const std::size_t nseg = t.segments_.size();
    for (SegmentId i = static_cast<SegmentId>(nsides); i < nseg; ++i) {
        for (SegmentId j = 0; j < i; ++j) {
            const auto x = intersect(t.segments_[i].line, t.segments_[j].line);
            if (!x) {
                continue;
            }
            const double ti = t.segments_[i].line.param(*x);
            const double tj = t.segments_[j].line.param(*x);
            if (ti < extent[i].lo - eps || ti > extent[i].hi + eps || tj < extent[j].lo - eps ||
                tj > extent[j].hi + eps) {
                continue;
            }
            const VertexId v = ed.add_vertex(i, j);
            ed.insert_on_segment(i, v);
            ed.insert_on_segment(j, v);
        }
    }

    // Every internal segment must start and end at a vertex.
    for (SegmentId s = static_cast<SegmentId>(nsides); s < nseg; ++s) {
        const auto& seg = t.segments_[s];
        if (seg.verts.size() < 2) {
            throw GeometryError("from_segments: segment end is not supported by another segment");
        }
        const double a = seg.line.param(t.vertices_[seg.verts.front()].pos);
        const double b = seg.line.param(t.vertices_[seg.verts.back()].pos);
        if (std::abs(a - extent[s].lo) > 1e3 * eps || std::abs(b - extent[s].hi) > 1e3 * eps) {
            throw GeometryError("from_segments: segment end is not supported by another segment");
        }
    }
    for (VertexId u = 0; u < t.vertices_.size(); ++u) {
        for (VertexId v = u + 1; v < t.vertices_.size(); ++v) {
            if (distance(t.vertices_[u].pos, t.vertices_[v].pos) <= eps) {
                throw GeometryError("from_segments: coincident vertices");
            }
        }
    }

    // Trace faces of the planar graph; bounded faces are counter-clockwise.
    const std::size_t nv = t.vertices_.size();
    std::vector<std::vector<VertexId>> nbrs(nv);
    for (const auto& seg : t.segments_) {
        for (std::size_t k = 0; k + 1 < seg.verts.size(); ++k) {
            nbrs[seg.verts[k]].push_back(seg.verts[k + 1]);
            nbrs[seg.verts[k + 1]].push_back(seg.verts[k]);
        }
    }
    for (VertexId v = 0; v < nv; ++v) {
        const Point o = t.vertices_[v].pos;
        std::sort(nbrs[v].begin(), nbrs[v].end(), [&](VertexId a, VertexId b) {
            const Point da = t.vertices_[a].pos - o;
            const Point db = t.vertices_[b].pos - o;
            return std::atan2(da.y, da.x) < std::atan2(db.y, db.x);
        });
    }
    std::map<std::pair<VertexId, VertexId>, bool> used;
    for (VertexId u = 0; u < nv; ++u) {
        for (VertexId v : nbrs[u]) {
            if (used[{u, v}]) {
                continue;
            }
            std::vector<VertexId> ring;
            VertexId a = u, b = v;
            while (!used[{a, b}]) {
                used[{a, b}] = true;
                ring.push_back(a);
                const auto& nb = nbrs[b];
                const auto it = std::find(nb.begin(), nb.end(), a);
                const std::size_t idx = static_cast<std::size_t>(it - nb.begin());
                const VertexId c = nb[(idx + nb.size() - 1) % nb.size()];
                a = b;
                b = c;
            }
            std::vector<Point> poly;
            for (VertexId w : ring) {
                poly.push_back(t.vertices_[w].pos);
            }
            if (signed_area(poly) > 0.0) {
                ed.add_cell(std::move(ring));
            }
        }
    }
    t.rebuild_indices();
    t.stats_ = t.recompute_stats();
    return t;
}

// --- queries ---------------------------------------------------------------

Counts TTessellation::counts() const {
    Counts c;
    for (const auto& v : vertices_) {
        c.nve += v.alive ? 1 : 0;
    }
    for (const auto& s : segments_) {
        if (s.alive) {
            c.ned += static_cast<long>(s.edge_count());
        }
    }
    c.nce = static_cast<long>(live_cells_.size());
    c.nseint = stats_.nseint;
    c.nveint = stats_.nveint;
    c.nnbseint = stats_.nnbseint;
    c.nbseint = stats_.nbseint;
    return c;
}

Counts counts(const TTessellation& t) { return t.counts(); }

std::vector<SegmentId> TTessellation::internal_segments() const {
    std::vector<SegmentId> out;
    for (SegmentId s = 0; s < segments_.size(); ++s) {
        if (segments_[s].alive && !segments_[s].boundary) {
            out.push_back(s);
        }
    }
    return out;
}

std::vector<EdgeView> TTessellation::edges() const {
    std::vector<EdgeView> out;
    for (SegmentId s = 0; s < segments_.size(); ++s) {
        const auto& seg = segments_[s];
        if (!seg.alive) {
            continue;
        }
        for (std::size_t k = 0; k + 1 < seg.verts.size(); ++k) {
            const VertexId a = seg.verts[k];
            const VertexId b = seg.verts[k + 1];
            out.push_back({a, b, s, cell_left_of(a, b), cell_left_of(b, a)});
        }
    }
    return out;
}

bool TTessellation::is_corner(VertexId v) const {
    const auto& vx = vertices_[v];
    return segments_[vx.segs[0]].boundary && segments_[vx.segs[1]].boundary;
}

bool TTessellation::is_internal_vertex(VertexId v) const {
    const auto& vx = vertices_[v];
    return !segments_[vx.segs[0]].boundary && !segments_[vx.segs[1]].boundary;
}

SegmentId TTessellation::common_segment(VertexId a, VertexId b) const {
    const auto& sa = vertices_[a].segs;
    const auto& sb = vertices_[b].segs;
    for (SegmentId s : sa) {
        if (s == sb[0] || s == sb[1]) {
            return s;
        }
    }
    return kNone;
}

SegmentId TTessellation::other_segment(VertexId v, SegmentId s) const {
    const auto& segs = vertices_[v].segs;
    return segs[0] == s ? segs[1] : segs[0];
}

bool TTessellation::ends_at(SegmentId s, VertexId v) const {
    const auto& verts = segments_[s].verts;
    return !verts.empty() && (verts.front() == v || verts.back() == v);
}

double TTessellation::vertex_angle(VertexId v) const {
    const auto& vx = vertices_[v];
    return acute_angle(segments_[vx.segs[0]].line, segments_[vx.segs[1]].line);
}

CellId TTessellation::cell_left_of(VertexId a, VertexId b) const {
    const auto it = halfedge_cell_.find(key(a, b));
    return it == halfedge_cell_.end() ? kNone : it->second;
}

std::vector<Point> TTessellation::cell_polygon(CellId c) const {
    std::vector<Point> poly;
    poly.reserve(cells_[c].ring.size());
    for (VertexId v : cells_[c].ring) {
        poly.push_back(vertices_[v].pos);
    }
    return poly;
}

double TTessellation::segment_length(SegmentId s) const {
    const auto& seg = segments_[s];
    return distance(vertices_[seg.verts.front()].pos, vertices_[seg.verts.back()].pos);
}

LinePattern TTessellation::line_pattern() const {
    LinePattern pattern;
    pattern.domain = domain_;
    for (const auto& s : segments_) {
        if (s.alive && !s.boundary) {
            pattern.lines.push_back(s.line);
        }
    }
    std::sort(pattern.lines.begin(), pattern.lines.end(), line_less);
    return pattern;
}

std::vector<double> TTessellation::cell_areas() const {
    std::vector<double> out;
    out.reserve(live_cells_.size());
    for (CellId c : live_cells_) {
        out.push_back(cells_[c].area);
    }
    return out;
}

std::vector<double> TTessellation::segment_angles(bool internal_only) const {
    std::vector<double> out;
    for (VertexId v = 0; v < vertices_.size(); ++v) {
        if (!vertices_[v].alive || is_corner(v)) {
            continue;
        }
        if (internal_only && !is_internal_vertex(v)) {
            continue;
        }
        out.push_back(vertex_angle(v));
    }
    return out;
}

Stats TTessellation::recompute_stats() const {
    Stats s;
    for (SegmentId id = 0; id < segments_.size(); ++id) {
        const auto& seg = segments_[id];
        if (!seg.alive) {
            continue;
        }
        for (std::size_t k = 0; k + 1 < seg.verts.size(); ++k) {
            s.total_edge_length += distance(vertices_[seg.verts[k]].pos, vertices_[seg.verts[k + 1]].pos);
        }
        if (!seg.boundary) {
            ++s.nseint;
            if (seg.edge_count() == 1) {
                ++s.nnbseint;
            } else {
                ++s.nbseint;
            }
        }
    }
    for (VertexId v = 0; v < vertices_.size(); ++v) {
        if (!vertices_[v].alive || is_corner(v)) {
            continue;
        }
        const double phi = vertex_angle(v);
        s.sum_vertex_angles += phi;
        if (is_internal_vertex(v)) {
            ++s.nveint;
            s.sum_internal_vertex_angles += phi;
        }
    }
    for (CellId c : live_cells_) {
        const double a = signed_area(cell_polygon(c));
        s.sum_sq_cell_area += a * a;
    }
    return s;
}

void TTessellation::rebuild_indices() {
    nonblocking_.clear();
    blocking_.clear();
    std::fill(segment_class_.begin(), segment_class_.end(), 0);
    std::fill(segment_slot_.begin(), segment_slot_.end(), kNone);
    for (SegmentId s = 0; s < segments_.size(); ++s) {
        reclassify(s);
    }
}

void TTessellation::reclassify(SegmentId s) {
    const auto& seg = segments_[s];
    std::uint8_t want = 0;
    if (seg.alive && !seg.boundary && seg.verts.size() >= 2) {
        want = seg.verts.size() == 2 ? 1 : 2;
    }
    const std::uint8_t have = segment_class_[s];
    if (want == have) {
        return;
    }
    if (have != 0) {
        auto& set = have == 1 ? nonblocking_ : blocking_;
        const std::uint32_t slot = segment_slot_[s];
        const SegmentId last = set.back();
        set[slot] = last;
        segment_slot_[last] = slot;
        set.pop_back();
    }
    if (want != 0) {
        auto& set = want == 1 ? nonblocking_ : blocking_;
        segment_slot_[s] = static_cast<std::uint32_t>(set.size());
        set.push_back(s);
    } else {
        segment_slot_[s] = kNone;
    }
    segment_class_[s] = want;
}

std::vector<std::array<double, 4>> canonical_segments(const TTessellation& t) {
    std::vector<std::array<double, 4>> out;
    for (SegmentId s : t.internal_segments()) {
        const auto& seg = t.segment(s);
        const double a = seg.line.param(t.vertex(seg.verts.front()).pos);
        const double b = seg.line.param(t.vertex(seg.verts.back()).pos);
        out.push_back({seg.line.theta, seg.line.p, std::min(a, b), std::max(a, b)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- validation ------------------------------------------------------------

namespace {

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

ValidationReport validate(const TTessellation& t) { return validate(t, t.tolerance()); }

ValidationReport validate(const TTessellation& t, const Tolerance& tol) {
    ValidationReport report;
    auto fail = [&](std::string code, std::string detail) {
        report.violations.push_back({std::move(code), std::move(detail)});
    };
    const double eps = tol.eps_len;
    const auto& domain = t.domain();

    long nve = 0;
    for (VertexId v = 0; v < t.vertex_slots(); ++v) {
        const auto& vx = t.vertex(v);
        if (!vx.alive) {
            continue;
        }
        ++nve;
        bool ok_refs = true;
        int ends = 0;
        for (SegmentId s : vx.segs) {
            if (s >= t.segment_slots() || !t.segment(s).alive) {
                fail("vertex-ref", "vertex " + std::to_string(v) + " references a dead segment");
                ok_refs = false;
                continue;
            }
            const auto& verts = t.segment(s).verts;
            if (std::find(verts.begin(), verts.end(), v) == verts.end()) {
                fail("vertex-ref", "vertex " + std::to_string(v) + " missing from segment " + std::to_string(s));
                ok_refs = false;
            }
            ends += t.ends_at(s, v) ? 1 : 0;
        }
        if (!ok_refs) {
            continue;
        }
        if (t.is_corner(v)) {
            if (ends != 2) {
                fail("corner", "corner vertex " + std::to_string(v) + " is not an end of both sides");
            }
            continue;
        }
        if (ends != 1) {
            fail("t-vertex", "vertex " + std::to_string(v) + " has " + std::to_string(ends) +
                                 " ending segments (T-vertex needs exactly one)");
        }
        const auto x = intersect(t.segment(vx.segs[0]).line, t.segment(vx.segs[1]).line);
        if (!x || distance(*x, vx.pos) > eps) {
            fail("vertex-position", "vertex " + std::to_string(v) + " off the intersection of its lines");
        }
        for (const Point& corner : domain) {
            if (distance(corner, vx.pos) <= eps) {
                fail("segment-ends-at-corner", "vertex " + std::to_string(v) + " coincides with a domain corner");
            }
        }
    }

    long ned = 0;
    long nseint = 0;
    const auto internal = t.internal_segments();
    for (SegmentId s = 0; s < t.segment_slots(); ++s) {
        const auto& seg = t.segment(s);
        if (!seg.alive) {
            continue;
        }
        if (!seg.boundary) {
            ++nseint;
        }
        ned += static_cast<long>(seg.edge_count());
        if (seg.verts.size() < 2) {
            fail("segment-edges", "segment " + std::to_string(s) + " has no edge");
            continue;
        }
        for (std::size_t k = 0; k < seg.verts.size(); ++k) {
            const VertexId v = seg.verts[k];
            if (!t.vertex(v).alive) {
                fail("segment-ref", "segment " + std::to_string(s) + " lists a dead vertex");
                continue;
            }
            const Point q = t.vertex(v).pos;
            if (std::abs(seg.line.signed_distance(q)) > eps) {
                fail("segment-collinear", "vertex " + std::to_string(v) + " off segment " + std::to_string(s));
            }
            if (k + 1 < seg.verts.size()) {
                const Point r = t.vertex(seg.verts[k + 1]).pos;
                if (seg.line.param(r) - seg.line.param(q) <= eps) {
                    fail("segment-order", "segment " + std::to_string(s) + " has unsorted or zero-length edges");
                }
            }
        }
        const SegmentId e0 = t.other_segment(seg.verts.front(), s);
        const SegmentId e1 = t.other_segment(seg.verts.back(), s);
        if (!seg.boundary && (e0 == kNone || e1 == kNone)) {
            fail("segment-ends", "segment " + std::to_string(s) + " has an unsupported end");
        }
    }

    // No two distinct segments on one line; no crossing away from a shared vertex.
    std::vector<SegmentId> all;
    for (SegmentId s = 0; s < t.segment_slots(); ++s) {
        if (t.segment(s).alive && t.segment(s).verts.size() >= 2) {
            all.push_back(s);
        }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const auto& a = t.segment(all[i]);
            const auto& b = t.segment(all[j]);
            if (same_line(a.line, b.line, tol)) {
                fail("aligned-segments", "segments " + std::to_string(all[i]) + " and " +
                                             std::to_string(all[j]) + " share a supporting line");
                continue;
            }
            if (a.boundary && b.boundary) {
                continue;
            }
            const auto x = intersect(a.line, b.line);
            if (!x) {
                continue;
            }
            auto strictly_inside = [&](const Segment& s) {
                const double lo = s.line.param(t.vertex(s.verts.front()).pos);
                const double hi = s.line.param(t.vertex(s.verts.back()).pos);
                const double tx = s.line.param(*x);
                return tx > lo + eps && tx < hi - eps;
            };
            auto inside_closed = [&](const Segment& s) {
                const double lo = s.line.param(t.vertex(s.verts.front()).pos);
                const double hi = s.line.param(t.vertex(s.verts.back()).pos);
                const double tx = s.line.param(*x);
                return tx >= lo - eps && tx <= hi + eps;
            };
            if ((strictly_inside(a) && inside_closed(b)) || (strictly_inside(b) && inside_closed(a))) {
                bool shared = false;
                for (VertexId v : a.verts) {
                    if (t.vertex(v).segs[0] == all[j] || t.vertex(v).segs[1] == all[j]) {
                        shared = true;
                    }
                }
                if (!shared) {
                    fail("crossing", "segments " + std::to_string(all[i]) + " and " + std::to_string(all[j]) +
                                         " meet away from a vertex");
                }
            }
        }
    }

    // Counting identities.
    const long nved = static_cast<long>(domain.size());
    const long nce = static_cast<long>(t.live_cells().size());
    if (nve != nved + 2 * nseint) {
        fail("count-vertices", "nve=" + std::to_string(nve) + " but nve(D)+2*nseint=" +
                                   std::to_string(nved + 2 * nseint));
    }
    if (ned != nved + 3 * nseint) {
        fail("count-edges", "ned=" + std::to_string(ned) + " but nve(D)+3*nseint=" +
                                std::to_string(nved + 3 * nseint));
    }
    if (nce != nseint + 1) {
        fail("count-cells", "nce=" + std::to_string(nce) + " but nseint+1=" + std::to_string(nseint + 1));
    }

    // Cells and the half-edge map.
    double area_sum = 0.0;
    double perimeter_sum = 0.0;
    std::size_t halfedges = 0;
    for (CellId c = 0; c < t.cell_slots(); ++c) {
        const auto& cell = t.cell(c);
        if (!cell.alive) {
            continue;
        }
        const auto& ring = cell.ring;
        const std::size_t n = ring.size();
        halfedges += n;
        if (n < 3) {
            fail("cell-ring", "cell " + std::to_string(c) + " has fewer than 3 vertices");
            continue;
        }
        const auto poly = t.cell_polygon(c);
        const double area = signed_area(poly);
        area_sum += area;
        perimeter_sum += perimeter(poly);
        if (!(area > 0.0)) {
            fail("cell-area", "cell " + std::to_string(c) + " has non-positive area");
        }
        if (!close_rel(area, cell.area, 1e-9) || !close_rel(perimeter(poly), cell.perimeter, 1e-9)) {
            fail("cell-metrics", "cell " + std::to_string(c) + " caches stale area or perimeter");
        }
        for (std::size_t k = 0; k < n; ++k) {
            const VertexId a = ring[k];
            const VertexId b = ring[(k + 1) % n];
            if (t.common_segment(a, b) == kNone) {
                fail("cell-ring", "cell " + std::to_string(c) + " ring steps off a segment");
            }
            if (t.cell_left_of(a, b) != c) {
                fail("halfedge-map", "cell " + std::to_string(c) + " edge missing from half-edge map");
            }
            const Point p0 = poly[(k + n - 1) % n];
            const Point p1 = poly[k];
            const Point p2 = poly[(k + 1) % n];
            if (cross(p1 - p0, p2 - p1) < -eps * std::max(distance(p0, p1), distance(p1, p2))) {
                fail("cell-convex", "cell " + std::to_string(c) + " is not convex");
            }
        }
    }
    long boundary_edges = 0;
    for (SegmentId s = 0; s < t.domain().size(); ++s) {
        boundary_edges += static_cast<long>(t.segment(s).edge_count());
    }
    if (static_cast<long>(halfedges) != 2 * ned - boundary_edges) {
        fail("halfedge-map", "cells do not cover every edge side exactly once");
    }
    if (!close_rel(area_sum, t.domain_area(), 1e-9)) {
        fail("area-sum", "cell areas sum to " + std::to_string(area_sum));
    }
    const Stats fresh = t.recompute_stats();
    if (!close_rel(perimeter_sum, 2.0 * fresh.total_edge_length - t.domain_perimeter(), 1e-9)) {
        fail("perimeter-sum", "cell perimeters do not sum to 2 l(T) - l(D)");
    }

    // Cached statistics and index sets.
    const Stats& cached = t.stats();
    if (cached.nseint != fresh.nseint || cached.nnbseint != fresh.nnbseint || cached.nbseint != fresh.nbseint ||
        cached.nveint != fresh.nveint) {
        fail("stats-cache", "cached segment or vertex counters differ from recomputation");
    }
    if (!close_rel(cached.total_edge_length, fresh.total_edge_length, 1e-8) ||
        !close_rel(cached.sum_sq_cell_area, fresh.sum_sq_cell_area, 1e-8) ||
        !close_rel(cached.sum_vertex_angles, fresh.sum_vertex_angles, 1e-8) ||
        !close_rel(cached.sum_internal_vertex_angles, fresh.sum_internal_vertex_angles, 1e-8)) {
        fail("stats-cache", "cached real statistics differ from recomputation");
    }
    if (static_cast<long>(t.nonblocking_segments().size()) != fresh.nnbseint ||
        static_cast<long>(t.blocking_segments().size()) != fresh.nbseint) {
        fail("index-sets", "blocking/non-blocking index sets out of date");
    }
    return report;
}

}  // namespace ttess
