#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ttess/operators.hpp"

using namespace ttess;
using testing_util::horizontal;
using testing_util::vertical;

namespace {

TTessellation blocked_state() {
    const std::vector<TTessellation::SegmentSpec> specs{
        {horizontal(0.5), {0.0, 0.5}, {1.0, 0.5}},
        {vertical(0.3), {0.3, 0.5}, {0.3, 1.0}},
    };
    return TTessellation::from_segments(unit_square(), specs);
}

SegmentId segment_on(const TTessellation& t, const Line& l) {
    for (SegmentId s : t.internal_segments()) {
        if (same_line(t.segment(s).line, l, t.tolerance())) {
            return s;
        }
    }
    return kNone;
}

void expect_same_geometry(const TTessellation& a, const TTessellation& b) {
    const auto ca = canonical_segments(a);
    const auto cb = canonical_segments(b);
    ASSERT_EQ(ca.size(), cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(ca[i][k], cb[i][k], 1e-9);
        }
    }
}

}  // namespace

TEST(Operators, SplitOfEmptySquare) {
    auto t = TTessellation::empty(unit_square());
    const Split s{t.live_cells()[0], horizontal(0.25)};
    const auto plan = plan_split(t, s);
    ASSERT_TRUE(plan);
    EXPECT_NEAR(plan->length, 1.0, 1e-15);
    EXPECT_EQ(plan->xi, 0);
    const auto rc = apply_update(t, s);
    EXPECT_EQ(rc.kind, UpdateKind::split);
    EXPECT_TRUE(std::holds_alternative<Merge>(rc.inverse));
    EXPECT_EQ(t.stats().nseint, 1);
    EXPECT_EQ(t.stats().nnbseint, 1);
    EXPECT_EQ(t.stats().nveint, 0);  // both chord ends lie on the boundary
    EXPECT_NEAR(t.stats().total_edge_length, 5.0, 1e-15);
    EXPECT_NEAR(t.stats().sum_sq_cell_area, 0.25 * 0.25 + 0.75 * 0.75, 1e-15);
    EXPECT_TRUE(validate(t).ok());
}

TEST(Operators, SplitLandingOnNonBlockingSegmentCountsXi) {
    auto t = TTessellation::empty(unit_square());
    apply_update(t, Split{t.live_cells()[0], horizontal(0.5)});
    CellId upper = kNone;
    for (CellId c : t.live_cells()) {
        for (const Point& q : t.cell_polygon(c)) {
            if (q.y > 0.9) {
                upper = c;
            }
        }
    }
    ASSERT_NE(upper, kNone);
    const Split s{upper, vertical(0.3)};
    EXPECT_EQ(xi(t, s), 1);
    const auto rc = apply_update(t, s);
    EXPECT_EQ(rc.xi, 1);
    EXPECT_EQ(t.stats().nnbseint, 1);
    EXPECT_EQ(t.stats().nbseint, 1);
    EXPECT_EQ(t.stats().nveint, 1);
    expect_same_geometry(t, blocked_state());
}

TEST(Operators, MergeRestoresEmpty) {
    auto t = TTessellation::empty(unit_square());
    apply_update(t, Split{t.live_cells()[0], Line{0.4, 0.3}});
    const auto merges = enumerate_merges(t);
    ASSERT_EQ(merges.size(), 1u);
    const auto rc = apply_update(t, merges[0]);
    EXPECT_EQ(t.stats().nseint, 0);
    EXPECT_EQ(t.counts().nce, 1);
    EXPECT_NEAR(t.stats().total_edge_length, 4.0, 1e-14);
    EXPECT_TRUE(std::holds_alternative<Split>(rc.inverse));
}

TEST(Operators, MergeOfBlockingSegmentIsNotApplicable) {
    auto t = blocked_state();
    const SegmentId h = segment_on(t, horizontal(0.5));
    ASSERT_NE(h, kNone);
    EXPECT_FALSE(plan_merge(t, Merge{h}));
    const auto before = canonical_segments(t);
    EXPECT_THROW(apply_update(t, Merge{h}), UpdateError);
    EXPECT_EQ(canonical_segments(t), before);
}

TEST(Operators, FlipExtendsBlockedSegment) {
    auto t = blocked_state();
    const SegmentId h = segment_on(t, horizontal(0.5));
    const auto plan = plan_flip(t, Flip{h, 0});
    ASSERT_TRUE(plan);
    EXPECT_NEAR(plan->removed_length, 0.3, 1e-15);
    EXPECT_NEAR(plan->added_length, 0.5, 1e-15);
    EXPECT_NEAR(plan->x.x, 0.3, 1e-15);
    EXPECT_NEAR(plan->x.y, 0.0, 1e-15);
    const auto rc = apply_update(t, Flip{h, 0});
    ASSERT_TRUE(validate(t).ok()) << validate(t).summary();
    const std::vector<TTessellation::SegmentSpec> expected{
        {vertical(0.3), {0.3, 0.0}, {0.3, 1.0}},
        {horizontal(0.5), {0.3, 0.5}, {1.0, 0.5}},
    };
    expect_same_geometry(t, TTessellation::from_segments(unit_square(), expected));
    EXPECT_NEAR(t.stats().total_edge_length, 4.0 + 1.0 + 0.7, 1e-14);
    // Only the extended segment is blocking now; the ends have moved to the boundary.
    EXPECT_EQ(t.stats().nbseint, 1);
    EXPECT_EQ(t.stats().nveint, 1);

    // Flipping back restores the original.
    apply_update(t, rc.inverse);
    expect_same_geometry(t, blocked_state());
}

TEST(Operators, FlipEnumeration) {
    const auto t = blocked_state();
    const auto flips = enumerate_flips(t);
    EXPECT_EQ(flips.size(), 2u);
    const auto rt = testing_util::random_state(3, 2000);
    EXPECT_EQ(enumerate_flips(rt).size(), static_cast<std::size_t>(2 * rt.stats().nbseint));
    EXPECT_EQ(enumerate_merges(rt).size(), static_cast<std::size_t>(rt.stats().nnbseint));
}

TEST(Operators, ProposalDensities) {
    const auto t = testing_util::random_state(2, 1500);
    const Stats& s = t.stats();
    EXPECT_NEAR(split_density_uniform(t), kPi / (2.0 * s.total_edge_length - 4.0), 1e-15);
    EXPECT_DOUBLE_EQ(merge_pmf_uniform(t), 1.0 / static_cast<double>(s.nnbseint));
    EXPECT_DOUBLE_EQ(flip_pmf_uniform(t), 0.5 / static_cast<double>(s.nbseint));
    const auto e = TTessellation::empty(unit_square());
    EXPECT_THROW(merge_pmf_uniform(e), UpdateError);
    EXPECT_THROW(flip_pmf_uniform(e), UpdateError);
}

TEST(Operators, ApplyRevertPropertyOnRandomStates) {
    Rng rng(99);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto t = testing_util::random_state(seed, 1500);
        for (int k = 0; k < 300; ++k) {
            std::vector<Update> candidates;
            candidates.push_back(sample_uniform_split(t, rng));
            for (auto m : enumerate_merges(t)) candidates.push_back(m);
            for (auto f : enumerate_flips(t)) candidates.push_back(f);
            const Update u = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
            if (!applicable(t, u)) {
                continue;
            }
            const auto geometry = canonical_segments(t);
            const Stats before = t.stats();
            const auto rc = apply_update(t, u);
            ASSERT_TRUE(validate(t).ok()) << validate(t).summary();
            // Receipt delta agrees with the statistics change.
            EXPECT_EQ(t.stats().nseint - before.nseint, rc.delta.nseint);
            EXPECT_NEAR(t.stats().total_edge_length - before.total_edge_length, rc.delta.total_edge_length, 1e-12);
            // The inverse applied afresh lands on the original geometry.
            TTessellation copy = t;
            apply_update(copy, rc.inverse);
            EXPECT_EQ(canonical_segments(copy).size(), geometry.size());
            expect_same_geometry(copy, [&] {
                TTessellation back = t;
                revert(back, rc, before);
                return back;
            }());
            revert(t, rc, before);
            EXPECT_EQ(t.stats(), before);
            EXPECT_EQ(canonical_segments(t), geometry);
            // Keep moving so later iterations see different states; ids may
            // have been recycled by the revert.
            if (applicable(t, u)) {
                apply_update(t, u);
            }
        }
    }
}

TEST(Operators, GreedyEmptyReachesEmptyTessellation) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto t = testing_util::random_state(seed, 3000);
        const auto steps = greedy_empty(t, 100000);
        EXPECT_GE(steps, static_cast<std::size_t>(0));
        EXPECT_EQ(t.stats().nseint, 0);
        EXPECT_EQ(t.counts().nce, 1);
        EXPECT_TRUE(validate(t).ok());
    }
}

TEST(Operators, KindNames) {
    EXPECT_STREQ(to_string(UpdateKind::split), "split");
    EXPECT_STREQ(to_string(UpdateKind::merge), "merge");
    EXPECT_STREQ(to_string(UpdateKind::flip), "flip");
    EXPECT_EQ(kind_of(Update{Flip{}}), UpdateKind::flip);
}
