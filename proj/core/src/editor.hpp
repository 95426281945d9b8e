#pragma once

#include <utility>
#include <vector>

#include "ttess/tessellation.hpp"

namespace ttess::detail {

/// Low-level topological edits on a TTessellation. Each primitive keeps the
/// half-edge map, the live-cell list and the cell metrics consistent; the caller
/// is responsible for statistics and for leaving a valid tessellation behind.
class Editor {
public:
    explicit Editor(TTessellation& t) : t_(t) {}

    VertexId add_vertex(SegmentId s0, SegmentId s1);
    VertexId add_corner(Point pos, SegmentId s0, SegmentId s1);
    void drop_vertex(VertexId v);

    SegmentId add_segment(const Line& line, bool boundary);
    void drop_segment(SegmentId s);

    CellId add_cell(std::vector<VertexId> ring);
    void drop_cell(CellId c);
    void set_ring(CellId c, std::vector<VertexId> ring);

    void insert_on_segment(SegmentId s, VertexId v);
    void erase_from_segment(SegmentId s, VertexId v);

    /// Inserts x between the consecutive ring vertices a -> b of cell c.
    void insert_in_ring(CellId c, VertexId a, VertexId b, VertexId x);
    void erase_from_ring(CellId c, VertexId x);

    /// Splits c along the chord between two of its ring vertices. The first
    /// returned cell (same id as c) holds the ring from a to b.
    std::pair<CellId, CellId> split_cell(CellId c, VertexId a, VertexId b);

    /// Merges the two cells on either side of edge a-b, keeping a and b in the
    /// merged ring. Returns the surviving cell (the one left of a -> b).
    CellId merge_across(VertexId a, VertexId b);

    void reclassify(SegmentId s) { t_.reclassify(s); }
    Stats& stats() { return t_.stats_; }
    TTessellation& tess() { return t_; }

    Vertex& vertex(VertexId v) { return t_.vertices_[v]; }
    Segment& segment(SegmentId s) { return t_.segments_[s]; }
    Cell& cell(CellId c) { return t_.cells_[c]; }

private:
    void register_ring(CellId c);
    void unregister_ring(CellId c);
    void update_metrics(CellId c);

    TTessellation& t_;
};

/// Rotates ring so that it starts at v.
std::vector<VertexId> rotated_to(const std::vector<VertexId>& ring, VertexId v);

}  // namespace ttess::detail
