#include "ttess/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "editor.hpp"

namespace ttess {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool live_internal(const TTessellation& t, SegmentId s) {
    return s < t.segment_slots() && t.segment(s).alive && !t.segment(s).boundary;
}

// 0 for boundary or dead segments, 1 non-blocking, 2 blocking.
int seg_class(const TTessellation& t, SegmentId s) {
    if (s == kNone || !live_internal(t, s)) {
        return 0;
    }
    return t.segment(s).edge_count() == 1 ? 1 : 2;
}

void dedupe(std::vector<std::uint32_t>& ids) {
    ids.erase(std::remove(ids.begin(), ids.end(), kNone), ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

double sum_sq_area(const TTessellation& t, const std::vector<CellId>& cells) {
    double s = 0.0;
    for (CellId c : cells) {
        if (t.cell(c).alive) {
            s += t.cell(c).area * t.cell(c).area;
        }
    }
    return s;
}

void class_counts(const TTessellation& t, const std::vector<SegmentId>& segs, long& nnb, long& nb) {
    nnb = 0;
    nb = 0;
    for (SegmentId s : segs) {
        const int k = seg_class(t, s);
        nnb += k == 1 ? 1 : 0;
        nb += k == 2 ? 1 : 0;
    }
}

std::size_t ring_index(const std::vector<VertexId>& ring, VertexId v) {
    return static_cast<std::size_t>(std::find(ring.begin(), ring.end(), v) - ring.begin());
}

VertexId ring_pred(const std::vector<VertexId>& ring, VertexId v) {
    const std::size_t n = ring.size();
    return ring[(ring_index(ring, v) + n - 1) % n];
}

}  // namespace

UpdateKind kind_of(const Update& u) { return static_cast<UpdateKind>(u.index()); }

const char* to_string(UpdateKind k) {
    switch (k) {
        case UpdateKind::split:
            return "split";
        case UpdateKind::merge:
            return "merge";
        case UpdateKind::flip:
            return "flip";
    }
    return "?";
}

// --- plans -----------------------------------------------------------------

std::optional<SplitPlan> plan_split(const TTessellation& t, const Split& s) {
    if (s.cell >= t.cell_slots() || !t.cell(s.cell).alive) {
        return std::nullopt;
    }
    const double eps = t.tolerance().eps_len;
    const auto& ring = t.cell(s.cell).ring;
    const std::size_t n = ring.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = s.line.signed_distance(t.vertex(ring[i]).pos);
        if (std::abs(d[i]) <= eps) {
            return std::nullopt;
        }
    }
    std::size_t crossings[2];
    int found = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((d[i] < 0.0) != (d[(i + 1) % n] < 0.0)) {
            if (found == 2) {
                return std::nullopt;
            }
            crossings[found++] = i;
        }
    }
    if (found != 2) {
        return std::nullopt;
    }
    SplitPlan plan;
    plan.cell = s.cell;
    plan.line = s.line;
    plan.a_from = ring[crossings[0]];
    plan.a_to = ring[(crossings[0] + 1) % n];
    plan.b_from = ring[crossings[1]];
    plan.b_to = ring[(crossings[1] + 1) % n];
    plan.a_host = t.common_segment(plan.a_from, plan.a_to);
    plan.b_host = t.common_segment(plan.b_from, plan.b_to);
    if (plan.a_host == kNone || plan.b_host == kNone) {
        return std::nullopt;
    }
    const auto pa = intersect(t.segment(plan.a_host).line, s.line);
    const auto pb = intersect(t.segment(plan.b_host).line, s.line);
    if (!pa || !pb) {
        return std::nullopt;
    }
    plan.a = *pa;
    plan.b = *pb;
    plan.length = distance(plan.a, plan.b);
    if (plan.length <= eps) {
        return std::nullopt;
    }
    plan.xi = (seg_class(t, plan.a_host) == 1 ? 1 : 0) + (seg_class(t, plan.b_host) == 1 ? 1 : 0);
    return plan;
}

std::optional<MergePlan> plan_merge(const TTessellation& t, const Merge& m) {
    if (seg_class(t, m.segment) != 1) {
        return std::nullopt;
    }
    const auto& seg = t.segment(m.segment);
    MergePlan plan;
    plan.segment = m.segment;
    plan.a = seg.verts.front();
    plan.b = seg.verts.back();
    plan.a_host = t.other_segment(plan.a, m.segment);
    plan.b_host = t.other_segment(plan.b, m.segment);
    plan.length = t.segment_length(m.segment);
    return plan;
}

std::optional<FlipPlan> plan_flip(const TTessellation& t, const Flip& f) {
    if (seg_class(t, f.segment) != 2 || (f.end != 0 && f.end != 1)) {
        return std::nullopt;
    }
    const double eps = t.tolerance().eps_len;
    const auto& verts = t.segment(f.segment).verts;
    FlipPlan plan;
    plan.segment = f.segment;
    plan.end = f.end;
    plan.v = f.end == 0 ? verts.front() : verts.back();
    plan.w = f.end == 0 ? verts[1] : verts[verts.size() - 2];
    plan.blocked = t.other_segment(plan.w, f.segment);
    plan.v_host = t.other_segment(plan.v, f.segment);
    if (!t.ends_at(plan.blocked, plan.w)) {
        return std::nullopt;
    }
    const CellId c1 = t.cell_left_of(plan.w, plan.v);
    const CellId c2 = t.cell_left_of(plan.v, plan.w);
    if (c1 == kNone || c2 == kNone) {
        return std::nullopt;
    }
    // The blocked segment sits on the side of s where w is a flat ring vertex.
    const CellId cb =
        t.common_segment(ring_pred(t.cell(c1).ring, plan.w), plan.w) == f.segment ? c1 : c2;

    const auto& u = t.segment(plan.blocked);
    const Line& ul = u.line;
    const double tw = ul.param(t.vertex(plan.w).pos);
    const double sign = u.verts.front() == plan.w ? -1.0 : 1.0;

    const auto& ring = t.cell(cb).ring;
    const std::size_t n = ring.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const VertexId p = ring[i];
        const VertexId q = ring[(i + 1) % n];
        if (p == plan.w) {
            continue;
        }
        const double dp = ul.signed_distance(t.vertex(p).pos);
        if (std::abs(dp) <= eps) {
            return std::nullopt;
        }
        if (q == plan.w) {
            continue;
        }
        const double dq = ul.signed_distance(t.vertex(q).pos);
        if ((dp < 0.0) == (dq < 0.0)) {
            continue;
        }
        const SegmentId g = t.common_segment(p, q);
        const auto x = intersect(ul, t.segment(g).line);
        if (!x) {
            continue;
        }
        const double along = sign * (ul.param(*x) - tw);
        if (along > eps && along < best) {
            best = along;
            plan.x = *x;
            plan.x_host = g;
        }
    }
    if (plan.x_host == kNone) {
        return std::nullopt;
    }
    plan.removed_length = distance(t.vertex(plan.v).pos, t.vertex(plan.w).pos);
    plan.added_length = distance(plan.x, t.vertex(plan.w).pos);
    return plan;
}

bool applicable(const TTessellation& t, const Update& u) {
    return std::visit(overloaded{[&](const Split& s) { return plan_split(t, s).has_value(); },
                                 [&](const Merge& m) { return plan_merge(t, m).has_value(); },
                                 [&](const Flip& f) { return plan_flip(t, f).has_value(); }},
                      u);
}

// --- apply -----------------------------------------------------------------

namespace {

UpdateReceipt apply_split(TTessellation& t, const SplitPlan& p) {
    detail::Editor ed(t);
    UpdateReceipt r;
    r.kind = UpdateKind::split;
    r.xi = p.xi;
    r.added_length = p.length;

    const CellId na = t.cell_left_of(p.a_to, p.a_from);
    const CellId nb = t.cell_left_of(p.b_to, p.b_from);
    std::vector<CellId> before{p.cell, na, nb};
    dedupe(before);
    const double sq_before = sum_sq_area(t, before);

    const SegmentId ns = ed.add_segment(p.line, false);
    const VertexId a = ed.add_vertex(p.a_host, ns);
    const VertexId b = ed.add_vertex(p.b_host, ns);
    ed.insert_on_segment(p.a_host, a);
    ed.insert_on_segment(p.b_host, b);
    ed.insert_on_segment(ns, a);
    ed.insert_on_segment(ns, b);
    if (na != kNone) {
        ed.insert_in_ring(na, p.a_to, p.a_from, a);
    }
    if (nb != kNone) {
        ed.insert_in_ring(nb, p.b_to, p.b_from, b);
    }
    ed.insert_in_ring(p.cell, p.a_from, p.a_to, a);
    ed.insert_in_ring(p.cell, p.b_from, p.b_to, b);
    const auto [c1, c2] = ed.split_cell(p.cell, a, b);
    ed.reclassify(ns);
    ed.reclassify(p.a_host);
    ed.reclassify(p.b_host);

    std::vector<CellId> after{c1, c2, na, nb};
    dedupe(after);

    StatsDelta& d = r.delta;
    d.total_edge_length = p.length;
    d.nseint = 1;
    d.nnbseint = 1 - p.xi;
    d.nbseint = p.xi;
    const double phi_a = t.vertex_angle(a);
    const double phi_b = t.vertex_angle(b);
    d.sum_vertex_angles = phi_a + phi_b;
    if (t.is_internal_vertex(a)) {
        ++d.nveint;
        d.sum_internal_vertex_angles += phi_a;
    }
    if (t.is_internal_vertex(b)) {
        ++d.nveint;
        d.sum_internal_vertex_angles += phi_b;
    }
    d.sum_sq_cell_area = sum_sq_area(t, after) - sq_before;
    ed.stats() += d;

    r.inverse = Merge{ns};
    r.touched_cells = after;
    r.touched_segments = {ns, p.a_host, p.b_host};
    dedupe(r.touched_segments);
    return r;
}

UpdateReceipt apply_merge(TTessellation& t, const MergePlan& p) {
    detail::Editor ed(t);
    UpdateReceipt r;
    r.kind = UpdateKind::merge;
    r.removed_length = p.length;

    const Line line = t.segment(p.segment).line;
    const CellId left = t.cell_left_of(p.a, p.b);
    const CellId right = t.cell_left_of(p.b, p.a);
    const CellId oa = t.cell_left_of(p.a, ring_pred(t.cell(left).ring, p.a));
    const CellId ob = t.cell_left_of(p.b, ring_pred(t.cell(right).ring, p.b));
    std::vector<CellId> before{left, right, oa, ob};
    dedupe(before);
    const double sq_before = sum_sq_area(t, before);

    std::vector<SegmentId> segs{p.segment, p.a_host, p.b_host};
    dedupe(segs);
    long nnb0 = 0, nb0 = 0;
    class_counts(t, segs, nnb0, nb0);

    StatsDelta& d = r.delta;
    d.total_edge_length = -p.length;
    d.nseint = -1;
    const double phi_a = t.vertex_angle(p.a);
    const double phi_b = t.vertex_angle(p.b);
    d.sum_vertex_angles = -(phi_a + phi_b);
    if (t.is_internal_vertex(p.a)) {
        --d.nveint;
        d.sum_internal_vertex_angles -= phi_a;
    }
    if (t.is_internal_vertex(p.b)) {
        --d.nveint;
        d.sum_internal_vertex_angles -= phi_b;
    }

    const CellId merged = ed.merge_across(p.a, p.b);
    ed.erase_from_ring(merged, p.a);
    ed.erase_from_ring(merged, p.b);
    if (oa != kNone) {
        ed.erase_from_ring(oa, p.a);
    }
    if (ob != kNone) {
        ed.erase_from_ring(ob, p.b);
    }
    ed.erase_from_segment(p.a_host, p.a);
    ed.erase_from_segment(p.b_host, p.b);
    ed.drop_vertex(p.a);
    ed.drop_vertex(p.b);
    ed.drop_segment(p.segment);
    ed.reclassify(p.a_host);
    ed.reclassify(p.b_host);

    long nnb1 = 0, nb1 = 0;
    class_counts(t, segs, nnb1, nb1);
    d.nnbseint = nnb1 - nnb0;
    d.nbseint = nb1 - nb0;
    r.xi = static_cast<int>(d.nbseint < 0 ? -d.nbseint : 0);

    std::vector<CellId> after{merged, oa, ob};
    dedupe(after);
    d.sum_sq_cell_area = sum_sq_area(t, after) - sq_before;
    ed.stats() += d;

    r.inverse = Split{merged, line};
    r.touched_cells = after;
    r.touched_segments = {p.a_host, p.b_host};
    dedupe(r.touched_segments);
    return r;
}

UpdateReceipt apply_flip(TTessellation& t, const FlipPlan& p) {
    detail::Editor ed(t);
    UpdateReceipt r;
    r.kind = UpdateKind::flip;
    r.removed_length = p.removed_length;
    r.added_length = p.added_length;

    const CellId c1 = t.cell_left_of(p.w, p.v);
    const CellId c2 = t.cell_left_of(p.v, p.w);
    std::vector<SegmentId> segs{p.segment, p.blocked, p.v_host, p.x_host};
    dedupe(segs);
    long nnb0 = 0, nb0 = 0;
    class_counts(t, segs, nnb0, nb0);

    StatsDelta& d = r.delta;
    d.total_edge_length = p.added_length - p.removed_length;
    const double phi_v = t.vertex_angle(p.v);
    d.sum_vertex_angles -= phi_v;
    if (t.is_internal_vertex(p.v)) {
        --d.nveint;
        d.sum_internal_vertex_angles -= phi_v;
    }

    // Cells that may change area: the two around the removed edge and the
    // neighbours across v_host and x_host.
    const double sq_c = t.cell(c1).area * t.cell(c1).area + t.cell(c2).area * t.cell(c2).area;
    const CellId merged = ed.merge_across(p.w, p.v);
    const CellId ov = t.cell_left_of(p.v, ring_pred(t.cell(merged).ring, p.v));
    CellId ox = kNone;
    {
        const auto& ring = t.cell(merged).ring;
        const std::size_t n = ring.size();
        const Line& gl = t.segment(p.x_host).line;
        const double tx = gl.param(p.x);
        for (std::size_t i = 0; i < n; ++i) {
            const VertexId a = ring[i];
            const VertexId b = ring[(i + 1) % n];
            if (t.common_segment(a, b) != p.x_host) {
                continue;
            }
            const double ta = gl.param(t.vertex(a).pos);
            const double tb = gl.param(t.vertex(b).pos);
            if (tx > std::min(ta, tb) && tx < std::max(ta, tb)) {
                ox = t.cell_left_of(b, a);
                break;
            }
        }
    }
    std::vector<CellId> others{ov, ox};
    dedupe(others);
    const double sq_before = sq_c + sum_sq_area(t, others);

    ed.erase_from_ring(merged, p.v);
    if (ov != kNone) {
        ed.erase_from_ring(ov, p.v);
    }
    ed.erase_from_segment(p.v_host, p.v);
    ed.erase_from_segment(p.segment, p.v);
    ed.drop_vertex(p.v);

    const VertexId x = ed.add_vertex(p.x_host, p.blocked);
    {
        const auto ring = t.cell(merged).ring;
        const std::size_t n = ring.size();
        const Line& gl = t.segment(p.x_host).line;
        const double tx = gl.param(t.vertex(x).pos);
        bool placed = false;
        for (std::size_t i = 0; i < n && !placed; ++i) {
            const VertexId a = ring[i];
            const VertexId b = ring[(i + 1) % n];
            if (t.common_segment(a, b) != p.x_host) {
                continue;
            }
            const double ta = gl.param(t.vertex(a).pos);
            const double tb = gl.param(t.vertex(b).pos);
            if (tx > std::min(ta, tb) && tx < std::max(ta, tb)) {
                const CellId twin = t.cell_left_of(b, a);
                ed.insert_in_ring(merged, a, b, x);
                if (twin != kNone) {
                    ed.insert_in_ring(twin, b, a, x);
                }
                placed = true;
            }
        }
        if (!placed) {
            throw std::logic_error("flip: extension end not on the merged cell");
        }
    }
    ed.insert_on_segment(p.x_host, x);
    ed.insert_on_segment(p.blocked, x);
    const auto [m1, m2] = ed.split_cell(merged, p.w, x);
    for (SegmentId s : segs) {
        ed.reclassify(s);
    }

    const double phi_x = t.vertex_angle(x);
    d.sum_vertex_angles += phi_x;
    if (t.is_internal_vertex(x)) {
        ++d.nveint;
        d.sum_internal_vertex_angles += phi_x;
    }
    long nnb1 = 0, nb1 = 0;
    class_counts(t, segs, nnb1, nb1);
    d.nnbseint = nnb1 - nnb0;
    d.nbseint = nb1 - nb0;

    std::vector<CellId> after{m1, m2, ov, ox};
    dedupe(after);
    d.sum_sq_cell_area = sum_sq_area(t, after) - sq_before;
    ed.stats() += d;

    const auto& bverts = t.segment(p.blocked).verts;
    r.inverse = Flip{p.blocked, bverts.front() == x ? 0 : 1};
    r.touched_cells = after;
    r.touched_segments = segs;
    return r;
}

}  // namespace

UpdateReceipt apply_update(TTessellation& t, const Update& u) {
    return std::visit(overloaded{[&](const Split& s) {
                                     const auto p = plan_split(t, s);
                                     if (!p) {
                                         throw UpdateError("split not applicable");
                                     }
                                     return apply_split(t, *p);
                                 },
                                 [&](const Merge& m) {
                                     const auto p = plan_merge(t, m);
                                     if (!p) {
                                         throw UpdateError("merge not applicable");
                                     }
                                     return apply_merge(t, *p);
                                 },
                                 [&](const Flip& f) {
                                     const auto p = plan_flip(t, f);
                                     if (!p) {
                                         throw UpdateError("flip not applicable");
                                     }
                                     return apply_flip(t, *p);
                                 }},
                      u);
}

void revert(TTessellation& t, const UpdateReceipt& r, const Stats& before) {
    apply_update(t, r.inverse);
    detail::Editor(t).stats() = before;
}

// --- enumeration and proposals ----------------------------------------------

std::vector<Merge> enumerate_merges(const TTessellation& t) {
    std::vector<Merge> out;
    for (SegmentId s : t.nonblocking_segments()) {
        out.push_back(Merge{s});
    }
    std::sort(out.begin(), out.end(), [](const Merge& a, const Merge& b) { return a.segment < b.segment; });
    return out;
}

std::vector<Flip> enumerate_flips(const TTessellation& t) {
    std::vector<SegmentId> segs(t.blocking_segments().begin(), t.blocking_segments().end());
    std::sort(segs.begin(), segs.end());
    std::vector<Flip> out;
    for (SegmentId s : segs) {
        out.push_back(Flip{s, 0});
        out.push_back(Flip{s, 1});
    }
    return out;
}

Split sample_uniform_split(const TTessellation& t, Rng& rng) {
    const auto cells = t.live_cells();
    double total = 0.0;
    for (CellId c : cells) {
        total += t.cell(c).perimeter;
    }
    std::uniform_real_distribution<double> unif(0.0, total);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        double target = unif(rng);
        CellId chosen = cells.back();
        for (CellId c : cells) {
            target -= t.cell(c).perimeter;
            if (target < 0.0) {
                chosen = c;
                break;
            }
        }
        const auto poly = t.cell_polygon(chosen);
        const Split s{chosen, sample_line_hitting(poly, rng)};
        if (plan_split(t, s)) {
            return s;
        }
    }
    throw UpdateError("sample_uniform_split: no admissible chord after 1000 draws");
}

double split_density_uniform(const TTessellation& t) {
    return kPi / (2.0 * t.stats().total_edge_length - t.domain_perimeter());
}

double merge_pmf_uniform(const TTessellation& t) {
    if (t.stats().nnbseint == 0) {
        throw UpdateError("merge_pmf_uniform: no non-blocking segment");
    }
    return 1.0 / static_cast<double>(t.stats().nnbseint);
}

double flip_pmf_uniform(const TTessellation& t) {
    if (t.stats().nbseint == 0) {
        throw UpdateError("flip_pmf_uniform: no blocking segment");
    }
    return 1.0 / (2.0 * static_cast<double>(t.stats().nbseint));
}

int xi(const TTessellation& t, const Split& s) {
    const auto p = plan_split(t, s);
    if (!p) {
        throw UpdateError("xi: split not applicable");
    }
    return p->xi;
}

std::size_t greedy_empty(TTessellation& t, std::size_t max_steps) {
    std::size_t steps = 0;
    auto step = [&](const Update& u) {
        apply_update(t, u);
        if (++steps > max_steps) {
            throw UpdateError("greedy_empty: step budget exceeded");
        }
    };
    while (t.stats().nseint > 0) {
        if (!t.nonblocking_segments().empty()) {
            step(Merge{t.nonblocking_segments().front()});
            continue;
        }
        // Shorten one blocking segment edge by edge, then merge it.
        const SegmentId s = t.blocking_segments().front();
        while (t.segment(s).edge_count() > 1) {
            if (plan_flip(t, Flip{s, 0})) {
                step(Flip{s, 0});
            } else if (plan_flip(t, Flip{s, 1})) {
                step(Flip{s, 1});
            } else {
                throw UpdateError("greedy_empty: both flips of a segment are degenerate");
            }
        }
        step(Merge{s});
    }
    return steps;
}

}  // namespace ttess
