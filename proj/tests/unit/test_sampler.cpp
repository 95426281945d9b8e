#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ttess/sampler.hpp"

using namespace ttess;

TEST(Sampler, ProposalConfigValidation) {
    EXPECT_NO_THROW((ProposalConfig{0.2, 0.3, 0.4}.validate()));
    EXPECT_THROW((ProposalConfig{0.5, 0.5, 0.5}.validate()), std::invalid_argument);
    EXPECT_THROW((ProposalConfig{-0.1, 0.5, 0.5}.validate()), std::invalid_argument);
}

TEST(Sampler, SplitMergeRatiosMatchProposalDensities) {
    const auto model = std::make_shared<AreaModel>(1.5, 20.0);
    const ProposalConfig prop{0.3, 0.45, 0.25};
    auto t = testing_util::random_state(17, 2000);
    Rng rng(4);
    for (int k = 0; k < 200; ++k) {
        const Stats before = t.stats();
        const Split s = sample_uniform_split(t, rng);
        const auto rc = apply_update(t, s);
        const double h = std::exp(-(model->energy(t.recompute_stats()) - model->energy(before)));
        const double expected = oracle::split_ratio(h, prop.p_split, prop.p_merge, before.total_edge_length, 4.0,
                                                    t.counts().nnbseint);
        const double got = hastings_ratio(*model, prop, before, t.domain_perimeter(), rc);
        EXPECT_NEAR(got, expected, 1e-9 * expected);

        // The reverse merge.
        const Stats mid = t.stats();
        const auto rc2 = apply_update(t, rc.inverse);
        const double h2 = std::exp(-(model->energy(t.recompute_stats()) - model->energy(mid)));
        const double expected2 =
            oracle::merge_ratio(h2, prop.p_split, prop.p_merge, t.stats().total_edge_length, 4.0, mid.nnbseint);
        const double got2 = hastings_ratio(*model, prop, mid, t.domain_perimeter(), rc2);
        EXPECT_NEAR(got2, expected2, 1e-9 * expected2);
        EXPECT_NEAR(got * got2, 1.0, 1e-10);
        // Keep every other split so the state grows.
        if (k % 2 == 0 && applicable(t, s)) apply_update(t, s);
    }
}

TEST(Sampler, FlipRatioUsesBlockingCounts) {
    const auto model = std::make_shared<CrttModel>(1.0);
    const ProposalConfig prop;
    auto t = testing_util::random_state(23, 2000);
    for (const Flip& f : enumerate_flips(t)) {
        if (!plan_flip(t, f)) continue;
        const Stats before = t.stats();
        const auto rc = apply_update(t, f);
        const double r = hastings_ratio(*model, prop, before, 4.0, rc);
        EXPECT_NEAR(r, static_cast<double>(before.nbseint) / static_cast<double>(t.counts().nbseint), 1e-15);
        revert(t, rc, before);
    }
}

TEST(Sampler, ChainIsDeterministicPerSeed) {
    const auto model = std::make_shared<CrttModel>(1.9);
    Chain a(TTessellation::empty(unit_square()), model, {}, 42);
    Chain b(TTessellation::empty(unit_square()), model, {}, 42);
    a.run(3000);
    b.run(3000);
    EXPECT_EQ(canonical_segments(a.tessellation()), canonical_segments(b.tessellation()));
    EXPECT_EQ(a.counts().accepted, b.counts().accepted);
}

TEST(Sampler, ChainKeepsValidStates) {
    const auto model = std::make_shared<AreaModel>(1.0, 10.0);
    Chain chain(TTessellation::empty(unit_square()), model, {0.4, 0.3, 0.2}, 8);
    chain.set_validate_period(50);
    std::uint64_t calls = 0;
    chain.run(5000, [&](const Chain&) { ++calls; }, 100);
    EXPECT_EQ(calls, 50u);
    EXPECT_EQ(chain.iteration(), 5000u);
    const auto& c = chain.counts();
    EXPECT_GT(c.proposed[0] + c.proposed[1] + c.proposed[2], 4000u);
    EXPECT_LT(c.proposed[0] + c.proposed[1] + c.proposed[2], 5000u);
    for (int k = 0; k < 3; ++k) {
        EXPECT_LE(c.accepted[k], c.proposed[k]);
    }
}

TEST(Sampler, CrttMeanSegmentsFollowSplitIdentity) {
    // For CRTT, E[nnbseint] = tau E[(2 l - l(D)) / pi]; check on a short run.
    const double tau = 1.0;
    Chain chain(TTessellation::empty(unit_square()), std::make_shared<CrttModel>(tau), {}, 77);
    chain.run(5000);
    std::vector<double> lhs, rhs;
    for (int i = 0; i < 3000; ++i) {
        chain.run(20);
        const auto& s = chain.tessellation().stats();
        lhs.push_back(static_cast<double>(s.nnbseint));
        rhs.push_back(tau * (2.0 * s.total_edge_length - 4.0) / kPi);
    }
    double ml = 0.0, mr = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        ml += lhs[i];
        mr += rhs[i];
    }
    ml /= lhs.size();
    mr /= rhs.size();
    const double se = std::hypot(batch_means_se(lhs, 30), batch_means_se(rhs, 30));
    EXPECT_LT(std::abs(ml - mr), 4.0 * se);
}

TEST(Sampler, ConvergenceVerdicts) {
    const CrttModel m(1.0);
    EXPECT_EQ(check_convergence_conditions(m, {}).verdict, ConvergenceReport::Verdict::convergent);
    EXPECT_EQ(check_convergence_conditions(m, {0.5, 0.0, 0.5}).verdict,
              ConvergenceReport::Verdict::not_established);
    EXPECT_STREQ(to_string(ConvergenceReport::Verdict::unknown), "unknown");
}

TEST(Sampler, GnzSplitSmallBudget) {
    SamplingOptions opt;
    opt.n_states = 600;
    opt.subsample = 30;
    opt.seed = 5;
    const auto rep = verify_gnz_split(std::make_shared<CrttModel>(1.0),
                                      [](const TTessellation&, const Split&) { return 1.0; }, "one", opt);
    EXPECT_EQ(rep.n_states, 600u);
    EXPECT_GT(rep.lhs, 0.0);
    EXPECT_LT(rep.z(), 4.0);
}

TEST(Sampler, GnzFlipSmallBudget) {
    SamplingOptions opt;
    opt.n_states = 600;
    opt.subsample = 30;
    opt.seed = 6;
    const auto rep = verify_gnz_flip(
        std::make_shared<CrttModel>(1.0),
        [](const TTessellation&, const Flip&, const FlipPlan& p) { return p.added_length; }, "added", opt);
    EXPECT_LT(rep.z(), 4.0);
}

TEST(Sampler, UniformityOnTwoLines) {
    const LinePattern p{{testing_util::horizontal(0.45), testing_util::vertical(0.55)}, unit_square()};
    const auto rep = conditional_uniformity_test(p, 8000, 10, 3);
    EXPECT_EQ(rep.states, 4u);
    EXPECT_DOUBLE_EQ(rep.dof, 3.0);
    EXPECT_GT(rep.p_value, 0.001);
}

TEST(Sampler, BatchMeansOnIidData) {
    Rng rng(1);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> xs(20000);
    for (auto& x : xs) x = g(rng);
    const double se = batch_means_se(xs, 50);
    EXPECT_NEAR(se, 2.0 / std::sqrt(20000.0), 0.3 * 2.0 / std::sqrt(20000.0));
}
