#include "editor.hpp"

#include <algorithm>
#include <stdexcept>

namespace ttess::detail {

std::vector<VertexId> rotated_to(const std::vector<VertexId>& ring, VertexId v) {
    const auto it = std::find(ring.begin(), ring.end(), v);
    if (it == ring.end()) {
        throw std::logic_error("rotated_to: vertex not in ring");
    }
    std::vector<VertexId> out;
    out.reserve(ring.size());
    out.insert(out.end(), it, ring.end());
    out.insert(out.end(), ring.begin(), it);
    return out;
}

VertexId Editor::add_vertex(SegmentId s0, SegmentId s1) {
    const auto pos = intersect(t_.segments_[s0].line, t_.segments_[s1].line);
    if (!pos) {
        throw GeometryError("add_vertex: parallel supporting lines");
    }
    return add_corner(*pos, s0, s1);
}

VertexId Editor::add_corner(Point pos, SegmentId s0, SegmentId s1) {
    VertexId id;
    if (!t_.free_vertices_.empty()) {
        id = t_.free_vertices_.back();
        t_.free_vertices_.pop_back();
    } else {
        id = static_cast<VertexId>(t_.vertices_.size());
        t_.vertices_.emplace_back();
    }
    Vertex& v = t_.vertices_[id];
    v.pos = pos;
    v.segs = {s0, s1};
    v.alive = true;
    return id;
}

void Editor::drop_vertex(VertexId v) {
    t_.vertices_[v] = Vertex{};
    t_.free_vertices_.push_back(v);
}

SegmentId Editor::add_segment(const Line& line, bool boundary) {
    SegmentId id;
    if (!t_.free_segments_.empty()) {
        id = t_.free_segments_.back();
        t_.free_segments_.pop_back();
    } else {
        id = static_cast<SegmentId>(t_.segments_.size());
        t_.segments_.emplace_back();
        t_.segment_slot_.push_back(kNone);
        t_.segment_class_.push_back(0);
    }
    Segment& s = t_.segments_[id];
    s.line = line;
    s.verts.clear();
    s.boundary = boundary;
    s.alive = true;
    return id;
}

void Editor::drop_segment(SegmentId s) {
    Segment& seg = t_.segments_[s];
    seg.alive = false;
    seg.verts.clear();
    t_.reclassify(s);
    t_.free_segments_.push_back(s);
}

CellId Editor::add_cell(std::vector<VertexId> ring) {
    CellId id;
    if (!t_.free_cells_.empty()) {
        id = t_.free_cells_.back();
        t_.free_cells_.pop_back();
    } else {
        id = static_cast<CellId>(t_.cells_.size());
        t_.cells_.emplace_back();
        t_.cell_slot_.push_back(kNone);
    }
    Cell& c = t_.cells_[id];
    c.ring = std::move(ring);
    c.alive = true;
    t_.cell_slot_[id] = static_cast<std::uint32_t>(t_.live_cells_.size());
    t_.live_cells_.push_back(id);
    register_ring(id);
    update_metrics(id);
    return id;
}

void Editor::drop_cell(CellId c) {
    unregister_ring(c);
    const std::uint32_t slot = t_.cell_slot_[c];
    const CellId last = t_.live_cells_.back();
    t_.live_cells_[slot] = last;
    t_.cell_slot_[last] = slot;
    t_.live_cells_.pop_back();
    t_.cell_slot_[c] = kNone;
    t_.cells_[c] = Cell{};
    t_.free_cells_.push_back(c);
}

void Editor::set_ring(CellId c, std::vector<VertexId> ring) {
    unregister_ring(c);
    t_.cells_[c].ring = std::move(ring);
    register_ring(c);
    update_metrics(c);
}

void Editor::register_ring(CellId c) {
    const auto& ring = t_.cells_[c].ring;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        t_.halfedge_cell_[TTessellation::key(ring[i], ring[(i + 1) % n])] = c;
    }
}

void Editor::unregister_ring(CellId c) {
    const auto& ring = t_.cells_[c].ring;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = t_.halfedge_cell_.find(TTessellation::key(ring[i], ring[(i + 1) % n]));
        if (it != t_.halfedge_cell_.end() && it->second == c) {
            t_.halfedge_cell_.erase(it);
        }
    }
}

void Editor::update_metrics(CellId c) {
    Cell& cell = t_.cells_[c];
    const auto poly = t_.cell_polygon(c);
    cell.area = signed_area(poly);
    cell.perimeter = perimeter(poly);
}

void Editor::insert_on_segment(SegmentId s, VertexId v) {
    Segment& seg = t_.segments_[s];
    const double tv = seg.line.param(t_.vertices_[v].pos);
    const auto it = std::lower_bound(seg.verts.begin(), seg.verts.end(), tv, [&](VertexId u, double t) {
        return seg.line.param(t_.vertices_[u].pos) < t;
    });
    seg.verts.insert(it, v);
}

void Editor::erase_from_segment(SegmentId s, VertexId v) {
    auto& verts = t_.segments_[s].verts;
    const auto it = std::find(verts.begin(), verts.end(), v);
    if (it == verts.end()) {
        throw std::logic_error("erase_from_segment: vertex not on segment");
    }
    verts.erase(it);
}

void Editor::insert_in_ring(CellId c, VertexId a, VertexId b, VertexId x) {
    auto& ring = t_.cells_[c].ring;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (ring[i] == a && ring[(i + 1) % n] == b) {
            ring.insert(ring.begin() + static_cast<std::ptrdiff_t>(i + 1), x);
            t_.halfedge_cell_.erase(TTessellation::key(a, b));
            t_.halfedge_cell_[TTessellation::key(a, x)] = c;
            t_.halfedge_cell_[TTessellation::key(x, b)] = c;
            update_metrics(c);
            return;
        }
    }
    throw std::logic_error("insert_in_ring: edge not in ring");
}

void Editor::erase_from_ring(CellId c, VertexId x) {
    auto& ring = t_.cells_[c].ring;
    const auto it = std::find(ring.begin(), ring.end(), x);
    if (it == ring.end()) {
        throw std::logic_error("erase_from_ring: vertex not in ring");
    }
    const std::size_t n = ring.size();
    const std::size_t i = static_cast<std::size_t>(it - ring.begin());
    const VertexId a = ring[(i + n - 1) % n];
    const VertexId b = ring[(i + 1) % n];
    ring.erase(it);
    t_.halfedge_cell_.erase(TTessellation::key(a, x));
    t_.halfedge_cell_.erase(TTessellation::key(x, b));
    t_.halfedge_cell_[TTessellation::key(a, b)] = c;
    update_metrics(c);
}

std::pair<CellId, CellId> Editor::split_cell(CellId c, VertexId a, VertexId b) {
    const auto ring = rotated_to(t_.cells_[c].ring, a);
    const auto jb = std::find(ring.begin(), ring.end(), b);
    if (jb == ring.end()) {
        throw std::logic_error("split_cell: vertex not in ring");
    }
    std::vector<VertexId> first(ring.begin(), jb + 1);
    std::vector<VertexId> second(jb, ring.end());
    second.push_back(a);
    set_ring(c, std::move(first));
    const CellId other = add_cell(std::move(second));
    return {c, other};
}

CellId Editor::merge_across(VertexId a, VertexId b) {
    const CellId left = t_.cell_left_of(a, b);
    const CellId right = t_.cell_left_of(b, a);
    if (left == kNone || right == kNone || left == right) {
        throw std::logic_error("merge_across: edge does not separate two cells");
    }
    const auto ring_left = rotated_to(t_.cells_[left].ring, a);
    const auto ring_right = rotated_to(t_.cells_[right].ring, b);
    std::vector<VertexId> merged(ring_left.begin() + 1, ring_left.end());
    merged.insert(merged.end(), ring_right.begin() + 1, ring_right.end());
    drop_cell(right);
    set_ring(left, std::move(merged));
    return left;
}

}  // namespace ttess::detail
