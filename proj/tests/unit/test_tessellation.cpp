#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ttess/tessellation.hpp"

using namespace ttess;
using testing_util::horizontal;
using testing_util::vertical;

namespace {

TTessellation cross_state() {
    // A full horizontal segment, with a vertical one blocked by it from above.
    const std::vector<TTessellation::SegmentSpec> specs{
        {horizontal(0.5), {0.0, 0.5}, {1.0, 0.5}},
        {vertical(0.3), {0.3, 0.5}, {0.3, 1.0}},
    };
    return TTessellation::from_segments(unit_square(), specs);
}

}  // namespace

TEST(Tessellation, EmptyHasOneCell) {
    const auto t = TTessellation::empty(unit_square());
    const Counts c = t.counts();
    EXPECT_EQ(c.nve, 4);
    EXPECT_EQ(c.ned, 4);
    EXPECT_EQ(c.nce, 1);
    EXPECT_EQ(c.nseint, 0);
    EXPECT_TRUE(validate(t).ok());
    EXPECT_DOUBLE_EQ(t.stats().total_edge_length, 4.0);
    EXPECT_DOUBLE_EQ(t.stats().sum_sq_cell_area, 1.0);
}

TEST(Tessellation, FromSegmentsCounts) {
    const auto t = cross_state();
    ASSERT_TRUE(validate(t).ok()) << validate(t).summary();
    const Counts c = t.counts();
    EXPECT_EQ(c.nseint, 2);
    EXPECT_EQ(c.nce, 3);
    EXPECT_EQ(c.nbseint, 1);
    EXPECT_EQ(c.nnbseint, 1);
    EXPECT_EQ(c.nveint, 1);
    // Counting identities for a quadrilateral domain.
    EXPECT_EQ(c.nve, 4 + 2 * c.nseint);
    EXPECT_EQ(c.ned, 4 + 3 * c.nseint);
    EXPECT_EQ(c.nce, c.nseint + 1);
}

TEST(Tessellation, CachedStatsMatchRawRecomputation) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto t = testing_util::random_state(seed, 1500);
        const auto raw = oracle::raw_stats(t);
        const Stats& s = t.stats();
        EXPECT_NEAR(s.total_edge_length, raw.length, 1e-9);
        EXPECT_EQ(s.nseint, raw.nseint);
        EXPECT_EQ(s.nnbseint, raw.nnbseint);
        EXPECT_EQ(s.nbseint, raw.nbseint);
        EXPECT_EQ(s.nveint, raw.nveint);
        EXPECT_NEAR(s.sum_sq_cell_area, raw.sum_sq_area, 1e-9);
        EXPECT_NEAR(s.sum_vertex_angles, raw.sum_angles, 1e-9);
        EXPECT_NEAR(s.sum_internal_vertex_angles, raw.sum_internal_angles, 1e-9);
        EXPECT_EQ(raw.nve, 4 + 2 * raw.nseint);
        EXPECT_EQ(raw.nce, raw.nseint + 1);
    }
}

TEST(Tessellation, CellsPartitionTheDomain) {
    const auto t = testing_util::random_state(11, 3000);
    double area = 0.0;
    for (CellId c : t.live_cells()) {
        const double a = oracle::shoelace(t.cell_polygon(c));
        EXPECT_GT(a, 0.0);
        area += a;
    }
    EXPECT_NEAR(area, 1.0, 1e-12);
}

TEST(Tessellation, NonCornerVertexCountIsTwiceSegments) {
    const auto t = testing_util::random_state(3, 2000);
    EXPECT_EQ(t.segment_angles().size(), static_cast<std::size_t>(2 * t.stats().nseint));
    EXPECT_EQ(t.segment_angles(true).size(), static_cast<std::size_t>(t.stats().nveint));
}

TEST(Tessellation, ValidateFlagsAlignedSegments) {
    // Two collinear segments on one supporting line violate the T-tessellation rule.
    const std::vector<TTessellation::SegmentSpec> specs{
        {vertical(0.5), {0.5, 0.0}, {0.5, 1.0}},
        {horizontal(0.5), {0.0, 0.5}, {0.5, 0.5}},
        {horizontal(0.5), {0.5, 0.5}, {1.0, 0.5}},
    };
    bool rejected = false;
    try {
        const auto t = TTessellation::from_segments(unit_square(), specs);
        rejected = !validate(t).ok();
    } catch (const std::exception&) {
        rejected = true;
    }
    EXPECT_TRUE(rejected);
}

TEST(Tessellation, ValidateFlagsCrossVertex) {
    // Two segments crossing each other make a degree-4 vertex.
    const std::vector<TTessellation::SegmentSpec> specs{
        {vertical(0.5), {0.5, 0.0}, {0.5, 1.0}},
        {horizontal(0.5), {0.0, 0.5}, {1.0, 0.5}},
    };
    bool rejected = false;
    try {
        const auto t = TTessellation::from_segments(unit_square(), specs);
        rejected = !validate(t).ok();
    } catch (const std::exception&) {
        rejected = true;
    }
    EXPECT_TRUE(rejected);
}

TEST(Tessellation, UnsupportedSegmentEndIsRejected) {
    const std::vector<TTessellation::SegmentSpec> specs{{horizontal(0.5), {0.0, 0.5}, {0.6, 0.5}}};
    EXPECT_ANY_THROW(TTessellation::from_segments(unit_square(), specs));
}

TEST(Tessellation, CanonicalSegmentsAreSorted) {
    const auto t = testing_util::random_state(5, 1000);
    const auto segs = canonical_segments(t);
    for (std::size_t i = 1; i < segs.size(); ++i) {
        EXPECT_TRUE(line_less(Line{segs[i - 1][0], segs[i - 1][1]}, Line{segs[i][0], segs[i][1]}));
    }
    for (const auto& s : segs) {
        EXPECT_LT(s[2], s[3]);
    }
}

TEST(Tessellation, LinePatternHasOneLinePerSegment) {
    const auto t = testing_util::random_state(8, 1000);
    EXPECT_EQ(t.line_pattern().size(), static_cast<std::size_t>(t.stats().nseint));
}

TEST(Tessellation, NonSquareDomain) {
    const Polygon hex{{1, 0}, {2, 0}, {3, 1}, {2, 2}, {1, 2}, {0, 1}};
    const auto t = testing_util::random_state(4, 1500, 1.0, hex);
    EXPECT_TRUE(validate(t).ok());
    const Counts c = t.counts();
    EXPECT_EQ(c.nve, 6 + 2 * c.nseint);
    EXPECT_EQ(c.ned, 6 + 3 * c.nseint);
    EXPECT_EQ(c.nce, c.nseint + 1);
}
