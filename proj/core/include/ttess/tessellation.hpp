#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ttess/geom.hpp"
#include "ttess/line_pattern.hpp"

namespace ttess {

using VertexId = std::uint32_t;
using SegmentId = std::uint32_t;
using CellId = std::uint32_t;
inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

/// A vertex always lies at the intersection of the supporting lines of exactly two
/// segments. At a T-vertex one of them passes through and the other ends; at a
/// domain corner both boundary sides end.
struct Vertex {
    Point pos;
    std::array<SegmentId, 2> segs{kNone, kNone};
    bool alive = false;
};

/// Maximal run of aligned edges. `verts` is sorted by the coordinate along the
/// line direction; consecutive entries are the edges.
struct Segment {
    Line line;
    std::vector<VertexId> verts;
    bool boundary = false;
    bool alive = false;

    std::size_t edge_count() const { return verts.empty() ? 0 : verts.size() - 1; }
};

/// Convex cell. `ring` lists its boundary vertices counter-clockwise, including
/// flat vertices where a neighbouring segment abuts from outside.
struct Cell {
    std::vector<VertexId> ring;
    double area = 0.0;
    double perimeter = 0.0;
    bool alive = false;
};

/// Global statistics maintained incrementally by the update operators.
struct Stats {
    double total_edge_length = 0.0;   // l(T), boundary included
    long nseint = 0;
    long nnbseint = 0;
    long nbseint = 0;
    long nveint = 0;
    double sum_sq_cell_area = 0.0;
    double sum_vertex_angles = 0.0;           // every vertex except domain corners
    double sum_internal_vertex_angles = 0.0;  // vertices off the domain boundary

    friend bool operator==(const Stats&, const Stats&) = default;
};

struct StatsDelta {
    double total_edge_length = 0.0;
    long nseint = 0;
    long nnbseint = 0;
    long nbseint = 0;
    long nveint = 0;
    double sum_sq_cell_area = 0.0;
    double sum_vertex_angles = 0.0;
    double sum_internal_vertex_angles = 0.0;

    StatsDelta operator-() const;
};

Stats& operator+=(Stats& s, const StatsDelta& d);

struct Counts {
    long nve = 0;
    long ned = 0;
    long nce = 0;
    long nseint = 0;
    long nveint = 0;
    long nnbseint = 0;
    long nbseint = 0;

    friend bool operator==(const Counts&, const Counts&) = default;
};

struct Violation {
    std::string code;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(const std::string& code) const;
    std::string summary() const;
};

namespace detail {
class Editor;
}

/// Edge view derived from the segment vertex lists.
struct EdgeView {
    VertexId a = kNone;
    VertexId b = kNone;
    SegmentId segment = kNone;
    CellId left = kNone;   // cell with directed edge a -> b, if any
    CellId right = kNone;  // cell with directed edge b -> a, if any
};

/// A T-tessellation of a bounded convex polygonal domain.
///
/// Vertices, segments and cells live in id-indexed stores with free lists. Ids are
/// stable while the record is alive and may be recycled afterwards.
class TTessellation {
public:
    /// The empty tessellation: one cell equal to the domain.
    static TTessellation empty(Polygon domain);
    static TTessellation empty(Polygon domain, const Tolerance& tol);

    /// Internal segment given by its supporting line and two end points.
    struct SegmentSpec {
        Line line;
        Point a;
        Point b;
    };

    /// Builds a subdivision from scratch. Vertices are created at every
    /// intersection of two segments and cells are traced as faces of the
    /// resulting planar graph. The result is not required to be a valid
    /// T-tessellation (see validate()); inputs whose ends are not supported by
    /// another segment, or that produce coincident vertices, are rejected.
    static TTessellation from_segments(Polygon domain, std::span<const SegmentSpec> segments);
    static TTessellation from_segments(Polygon domain, std::span<const SegmentSpec> segments,
                                       const Tolerance& tol);

    const Polygon& domain() const { return domain_; }
    double domain_perimeter() const { return domain_perimeter_; }
    double domain_area() const { return domain_area_; }
    const Tolerance& tolerance() const { return tol_; }
    const Stats& stats() const { return stats_; }
    Counts counts() const;

    const Vertex& vertex(VertexId v) const { return vertices_[v]; }
    const Segment& segment(SegmentId s) const { return segments_[s]; }
    const Cell& cell(CellId c) const { return cells_[c]; }
    std::size_t vertex_slots() const { return vertices_.size(); }
    std::size_t segment_slots() const { return segments_.size(); }
    std::size_t cell_slots() const { return cells_.size(); }

    std::span<const CellId> live_cells() const { return live_cells_; }
    std::span<const SegmentId> nonblocking_segments() const { return nonblocking_; }
    std::span<const SegmentId> blocking_segments() const { return blocking_; }
    std::vector<SegmentId> internal_segments() const;
    std::vector<EdgeView> edges() const;

    bool is_corner(VertexId v) const;
    bool is_internal_vertex(VertexId v) const;
    /// Segment on which both vertices lie, or kNone.
    SegmentId common_segment(VertexId a, VertexId b) const;
    /// The segment of v other than s.
    SegmentId other_segment(VertexId v, SegmentId s) const;
    /// True when v is one of the two end points of s.
    bool ends_at(SegmentId s, VertexId v) const;
    /// Acute angle between the two segments meeting at v.
    double vertex_angle(VertexId v) const;
    /// Cell having the directed edge a -> b on its boundary, or kNone.
    CellId cell_left_of(VertexId a, VertexId b) const;
    std::vector<Point> cell_polygon(CellId c) const;
    double segment_length(SegmentId s) const;

    LinePattern line_pattern() const;
    std::vector<double> cell_areas() const;
    /// Acute angles at T-vertices; domain corners are never included.
    std::vector<double> segment_angles(bool internal_only = false) const;

    /// Statistics recomputed from the geometry.
    Stats recompute_stats() const;

private:
    friend class detail::Editor;

    TTessellation() = default;
    void init_domain(Polygon domain, const Tolerance& tol);
    void rebuild_indices();
    void reclassify(SegmentId s);
    static std::uint64_t key(VertexId a, VertexId b) {
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    Polygon domain_;
    double domain_perimeter_ = 0.0;
    double domain_area_ = 0.0;
    Tolerance tol_;

    std::vector<Vertex> vertices_;
    std::vector<Segment> segments_;
    std::vector<Cell> cells_;
    std::vector<VertexId> free_vertices_;
    std::vector<SegmentId> free_segments_;
    std::vector<CellId> free_cells_;

    std::unordered_map<std::uint64_t, CellId> halfedge_cell_;
    std::vector<CellId> live_cells_;
    std::vector<std::uint32_t> cell_slot_;
    std::vector<SegmentId> nonblocking_;
    std::vector<SegmentId> blocking_;
    // Position of a segment in nonblocking_ or blocking_, and which of the two
    // (0 none, 1 non-blocking, 2 blocking).
    std::vector<std::uint32_t> segment_slot_;
    std::vector<std::uint8_t> segment_class_;

    Stats stats_;
};

/// Checks every defining property of a T-tessellation, the counting identities
/// and the consistency of the cached statistics and adjacency.
ValidationReport validate(const TTessellation& t);
ValidationReport validate(const TTessellation& t, const Tolerance& tol);

Counts counts(const TTessellation& t);

/// Canonical geometric description: internal segments as (theta, p, t0, t1)
/// sorted by line. Two tessellations are geometrically equal iff these match.
std::vector<std::array<double, 4>> canonical_segments(const TTessellation& t);

}  // namespace ttess
