// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 1 for ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ttess/enumerate.hpp"
#include "ttess/line_pattern.hpp"
#include "ttess/models.hpp"
#include "ttess/monitor.hpp"
#include "ttess/sampler.hpp"

using namespace ttess;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

Line horizontal(double y) { return {0.0, y}; }
Line vertical(double x) { return {kPi / 2.0, -x}; }

// 1 -----------------------------------------------------------------------------
void structural_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    Chain chain(TTessellation::empty(unit_square()), std::make_shared<CrttModel>(1.9), {}, 101);
    std::size_t checked = 0, bad_identity = 0, bad_validate = 0;
    const long nvd = 4;
    chain.run(
        100000,
        [&](const Chain& c) {
            const auto& t = c.tessellation();
            ++checked;
            if (!validate(t).ok()) {
                ++bad_validate;
            }
            const Counts k = counts(t);
            if (k.nve != nvd + 2 * k.nseint || k.ned != nvd + 3 * k.nseint || k.nce != k.nseint + 1) {
                ++bad_identity;
            }
        },
        100);
    const double secs = seconds_since(t0);
    report(1, "structural identities", bad_identity == 0 && bad_validate == 0 && secs < 60.0,
           fmt("%zu states checked, %zu identity violations, %zu invalid states, %.1f s (< 60 s)", checked,
               bad_identity, bad_validate, secs));
}

// 2 -----------------------------------------------------------------------------
bool stats_close(const Stats& a, const Stats& b) {
    return a.nseint == b.nseint && a.nnbseint == b.nnbseint && a.nbseint == b.nbseint && a.nveint == b.nveint &&
           close_rel(a.total_edge_length, b.total_edge_length, 1e-9) &&
           close_rel(a.sum_sq_cell_area, b.sum_sq_cell_area, 1e-9) &&
           close_rel(a.sum_vertex_angles, b.sum_vertex_angles, 1e-9) &&
           close_rel(a.sum_internal_vertex_angles, b.sum_internal_vertex_angles, 1e-9);
}

bool geometry_close(const SegmentSet& a, const SegmentSet& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int k = 0; k < 4; ++k) {
            if (!close_rel(a[i][k], b[i][k], 1e-9)) {
                return false;
            }
        }
    }
    return true;
}

void invertibility() {
    Chain chain(TTessellation::empty(unit_square()), std::make_shared<CrttModel>(1.9), {}, 202);
    chain.run(2000);
    Rng rng(203);
    std::size_t pairs = 0, bad = 0;
    std::size_t by_kind[3] = {0, 0, 0};
    while (pairs < 10000) {
        chain.run(5);
        TTessellation t = chain.tessellation();
        const int kind = static_cast<int>(rng() % 3);
        Update u = sample_uniform_split(t, rng);
        if (kind == 1) {
            const auto ms = enumerate_merges(t);
            if (ms.empty()) continue;
            u = ms[rng() % ms.size()];
        } else if (kind == 2) {
            const auto fs = enumerate_flips(t);
            if (fs.empty()) continue;
            u = fs[rng() % fs.size()];
        }
        if (!applicable(t, u)) {
            continue;
        }
        const auto geom = canonical_segments(t);
        const Stats before = t.stats();
        const auto rc = apply_update(t, u);
        apply_update(t, rc.inverse);
        if (!geometry_close(canonical_segments(t), geom) || !stats_close(t.stats(), before) ||
            !stats_close(t.recompute_stats(), before)) {
            ++bad;
        }
        ++by_kind[kind];
        ++pairs;
    }
    report(2, "operator invertibility", bad == 0,
           fmt("%zu pairs (split %zu, merge %zu, flip %zu), %zu mismatches beyond 1e-9 relative", pairs, by_kind[0],
               by_kind[1], by_kind[2], bad));
}

// 3 -----------------------------------------------------------------------------
void enumeration() {
    struct Case {
        const char* name;
        LinePattern pattern;
        std::size_t expected;
    };
    const std::vector<Case> cases{
        {"one line", {{horizontal(0.5)}, unit_square()}, 1},
        {"two crossing lines", {{horizontal(0.45), vertical(0.55)}, unit_square()}, 4},
        {"two non-crossing lines", {{horizontal(0.3), horizontal(0.7)}, unit_square()}, 1},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const PatternLayout layout(c.pattern);
        const auto keys = enumerate_keys(layout);
        const std::size_t brute = oracle::brute_force_nttl(c.pattern);
        bool valid = true;
        for (const auto& k : keys) {
            valid = valid && validate(layout.build(k)).ok();
        }
        const auto g = analyze_flip_graph(layout, keys);
        const bool this_ok = keys.size() == c.expected && brute == c.expected && valid && g.closed;
        ok = ok && this_ok;
        detail += fmt("%s%s nttl=%zu (brute force %zu, expected %zu, valid %d, flip-closed %d)",
                      detail.empty() ? "" : "; ", c.name, keys.size(), brute, c.expected, valid ? 1 : 0,
                      g.closed ? 1 : 0);
    }
    report(3, "enumeration oracle", ok, detail);
}

// 4 -----------------------------------------------------------------------------
void uniformity() {
    const LinePattern p{{horizontal(0.45), vertical(0.55)}, unit_square()};
    const auto rep = conditional_uniformity_test(p, 100000, 10, 404);
    std::string counts;
    for (auto c : rep.counts) {
        counts += (counts.empty() ? "" : ",") + std::to_string(c);
    }
    report(4, "conditional uniformity", rep.states == 4 && rep.p_value > 0.01,
           fmt("%zu states, counts [%s], chi2 %.3f on %.0f dof, p %.4f (> 0.01)", rep.states, counts.c_str(),
               rep.chi2, rep.dof, rep.p_value));
}

// 5, 6 ---------------------------------------------------------------------------
SamplingOptions gnz_options(std::uint64_t seed) {
    SamplingOptions opt;
    opt.n_states = 10000;
    opt.subsample = 100;
    opt.seed = seed;
    return opt;
}

std::string gnz_detail(const char* model, const GnzReport& r) {
    return fmt("%s lhs %.5f rhs %.5f (se %.4f/%.4f) z %.2f", model, r.lhs, r.rhs, r.lhs_se, r.rhs_se, r.z());
}

void gnz_split() {
    const auto one = [](const TTessellation&, const Split&) { return 1.0; };
    const auto a = verify_gnz_split(std::make_shared<CrttModel>(1.0), one, "one", gnz_options(505));
    const auto b = verify_gnz_split(std::make_shared<AreaModel>(1.0, 10.0), one, "one", gnz_options(506));
    report(5, "GNZ split identity", a.z() <= 3.0 && b.z() <= 3.0 && a.n_states >= 10000 && b.n_states >= 10000,
           gnz_detail("crtt(1)", a) + "; " + gnz_detail("area(1,10)", b) + "; 10000 states each, bound z <= 3");
}

void gnz_flip() {
    const auto added = [](const TTessellation&, const Flip&, const FlipPlan& p) { return p.added_length; };
    const auto a = verify_gnz_flip(std::make_shared<CrttModel>(1.0), added, "added_length", gnz_options(606));
    const auto b = verify_gnz_flip(std::make_shared<AreaModel>(1.0, 10.0), added, "added_length", gnz_options(607));
    report(6, "GNZ flip identity", a.z() <= 3.0 && b.z() <= 3.0,
           gnz_detail("crtt(1)", a) + "; " + gnz_detail("area(1,10)", b) + "; 10000 states each, bound z <= 3");
}

// 7 -----------------------------------------------------------------------------
void detailed_balance() {
    const auto model = std::make_shared<AreaModel>(1.3, 10.0);
    const auto crtt = std::make_shared<CrttModel>(1.0);
    const ProposalConfig prop;
    Chain chain(TTessellation::empty(unit_square()), model, prop, 707);
    chain.run(2000);
    Rng rng(708);
    std::size_t sm = 0, sm_bad = 0, fl = 0, fl_bad = 0, fl_count_bad = 0;
    double worst = 0.0;
    while (sm < 1000 || fl < 1000) {
        chain.run(5);
        TTessellation t = chain.tessellation();
        const double perim = t.domain_perimeter();
        if (sm < 1000) {
            // Alternate split-first and merge-first pairs.
            Update u = sample_uniform_split(t, rng);
            if (sm % 2 == 1) {
                const auto ms = enumerate_merges(t);
                if (!ms.empty()) u = ms[rng() % ms.size()];
            }
            const Stats s0 = t.stats();
            const auto rc = apply_update(t, u);
            const double r1 = hastings_ratio(*model, prop, s0, perim, rc);
            const Stats s1 = t.stats();
            const auto rc2 = apply_update(t, rc.inverse);
            const double r2 = hastings_ratio(*model, prop, s1, perim, rc2);
            const double dev = std::abs(r1 * r2 - 1.0);
            worst = std::max(worst, dev);
            if (dev > 1e-10) ++sm_bad;
            ++sm;
        }
        if (fl < 1000) {
            const auto fs = enumerate_flips(t);
            if (fs.empty()) continue;
            const Flip f = fs[rng() % fs.size()];
            if (!plan_flip(t, f)) continue;
            const Stats s0 = t.stats();
            const auto rc = apply_update(t, f);
            const Stats s1 = t.stats();
            const auto rc2 = apply_update(t, rc.inverse);
            const Stats s2 = t.stats();
            // Proposal counts of the two directions match exactly.
            if (s0.nbseint != s2.nbseint) ++fl_count_bad;
            const double r1 = hastings_ratio(*crtt, prop, s0, perim, rc);
            const double r2 = hastings_ratio(*crtt, prop, s1, perim, rc2);
            const double exact = static_cast<double>(s0.nbseint * s1.nbseint) /
                                 static_cast<double>(s1.nbseint * s2.nbseint);
            if (exact != 1.0 || std::abs(r1 * r2 - 1.0) > 4 * std::numeric_limits<double>::epsilon()) ++fl_bad;
            const double m1 = hastings_ratio(*model, prop, s0, perim, rc);
            const double m2 = hastings_ratio(*model, prop, s1, perim, rc2);
            if (std::abs(m1 * m2 - 1.0) > 1e-10) ++fl_bad;
            ++fl;
        }
    }
    report(7, "detailed-balance pairs", sm_bad == 0 && fl_bad == 0 && fl_count_bad == 0,
           fmt("%zu split/merge pairs, max |r r' - 1| = %.2e (<= 1e-10), %zu failures; %zu flip pairs, "
               "%zu count mismatches, %zu ratio failures",
               sm, worst, sm_bad, fl, fl_count_bad, fl_bad));
}

// 8 -----------------------------------------------------------------------------
void poisson_lines() {
    Rng rng(808);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(sample_poisson_lines(unit_square(), 1.0, rng).size());
        s += k;
        s2 += k * k;
    }
    const double mean = s / n;
    const double var = (s2 - n * mean * mean) / (n - 1);
    const double se = std::sqrt(var / n);
    const double target = 4.0 / kPi;
    report(8, "Poisson line sampler", std::abs(mean - target) <= 3.0 * se,
           fmt("mean count %.5f vs 4/pi = %.5f, se %.5f, |diff|/se = %.2f (<= 3)", mean, target, se,
               std::abs(mean - target) / se));
}

// 9 -----------------------------------------------------------------------------
void paper_anchors() {
    const std::uint64_t n = 100000;
    Chain chain(TTessellation::empty(unit_square()), std::make_shared<CrttModel>(1.9), {}, 909);
    std::vector<double> energy;
    energy.reserve(n);
    std::vector<SegmentSet> snaps;
    for (std::uint64_t i = 1; i <= n; ++i) {
        chain.step();
        energy.push_back(chain.energy());
        if (i > n / 2 && i % 10 == 0) {
            snaps.push_back(canonical_segments(chain.tessellation()));
        }
    }
    double m = 0.0, v = 0.0;
    const std::size_t half = n / 2;
    for (std::size_t i = half; i < n; ++i) m += energy[i];
    m /= static_cast<double>(n - half);
    for (std::size_t i = half; i < n; ++i) v += (energy[i] - m) * (energy[i] - m);
    const double sd = std::sqrt(v / static_cast<double>(n - half - 1));
    std::size_t enter = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(energy[i] - m) <= 3.0 * sd) {
            enter = i + 1;
            break;
        }
    }
    // Snapshots every 10 iterations; lag 50 snapshots = 500 iterations. A
    // segment survives when its line and both end points are unchanged.
    const auto surv = segment_survival(snaps, {50}, SegmentIdentity::geometry);
    const double f = surv.fraction[0];
    report(9, "burn-in and segment survival", enter <= 1000 && f >= 0.001 && f <= 0.05,
           fmt("energy band %.2f +- %.2f entered at iteration %zu (<= 1000); survival at lag 500 = %.4f "
               "(in [0.001, 0.05])",
               m, 3.0 * sd, enter, f));
}

// 10 ----------------------------------------------------------------------------
struct ContrastStats {
    double lorenz_half = 0.0;
    std::vector<double> angles;
    std::size_t states = 0;
    double mean_segments = 0.0;
};

ContrastStats contrast_run(const ModelPtr& model, std::uint64_t seed) {
    Chain chain(TTessellation::empty(unit_square()), model, {}, seed);
    chain.run(20000);
    ContrastStats cs;
    for (int k = 0; k < 100; ++k) {
        chain.run(200);
        const auto& t = chain.tessellation();
        cs.lorenz_half += lorenz_at(lorenz_curve(t.cell_areas()), 0.5);
        const auto a = t.segment_angles();
        cs.angles.insert(cs.angles.end(), a.begin(), a.end());
        cs.mean_segments += static_cast<double>(t.stats().nseint);
        ++cs.states;
    }
    cs.lorenz_half /= static_cast<double>(cs.states);
    cs.mean_segments /= static_cast<double>(cs.states);
    return cs;
}

void model_contrasts() {
    const auto crtt = contrast_run(std::make_shared<CrttModel>(1.9), 1001);
    const auto acs = contrast_run(std::make_shared<AcsModel>(10.75), 1002);
    const auto area = contrast_run(std::make_shared<AreaModel>(0.043, 10000.0), 1003);
    // Angle weights in deficit form, beta sum (pi/2 - phi); see README.
    const auto angle = contrast_run(
        std::make_shared<AngleModel>(12.1, 2.5, AngleVertices::all_non_corner, AngleForm::deficit), 1004);
    const auto hc = angle_histogram(crtt.angles, 32).cdf();
    const auto ha = angle_histogram(angle.angles, 32).cdf();
    bool dominated = true;
    for (std::size_t i = 0; i < hc.size(); ++i) {
        dominated = dominated && ha[i] <= hc[i];
    }
    const bool a_ok = acs.lorenz_half < crtt.lorenz_half;
    const bool b_ok = area.lorenz_half > crtt.lorenz_half;
    report(10, "model contrasts", a_ok && b_ok && dominated,
           fmt("Lorenz(0.5): crtt %.4f, acs %.4f (%s), area %.4f (%s); angle CDF at pi/4: crtt %.3f, angle %.3f, "
               "dominated on all %zu bins: %s; %zu states per model, mean segments crtt %.1f acs %.1f area %.1f "
               "angle %.1f",
               crtt.lorenz_half, acs.lorenz_half, a_ok ? "below" : "NOT below", area.lorenz_half,
               b_ok ? "above" : "NOT above", hc[15], ha[15], hc.size(), dominated ? "yes" : "no", crtt.states,
               crtt.mean_segments, acs.mean_segments, area.mean_segments, angle.mean_segments));
}

// 11 ----------------------------------------------------------------------------
Stats raw_as_stats(const oracle::RawStats& r) {
    Stats s;
    s.total_edge_length = r.length;
    s.nseint = r.nseint;
    s.nnbseint = r.nnbseint;
    s.nbseint = r.nbseint;
    s.nveint = r.nveint;
    s.sum_sq_cell_area = r.sum_sq_area;
    s.sum_vertex_angles = r.sum_angles;
    s.sum_internal_vertex_angles = r.sum_internal_angles;
    return s;
}

void energy_consistency() {
    struct Named {
        const char* name;
        ModelPtr model;
    };
    const std::vector<Named> models{
        {"crtt", std::make_shared<CrttModel>(1.9)},
        {"acs", std::make_shared<AcsModel>(10.75)},
        {"area", std::make_shared<AreaModel>(0.043, 10000.0)},
        {"angle", std::make_shared<AngleModel>(1.0, 0.5)},
        {"angle-deficit", std::make_shared<AngleModel>(12.1, 2.5, AngleVertices::all_non_corner, AngleForm::deficit)},
        {"angle-internal", std::make_shared<AngleModel>(2.0, 1.0, AngleVertices::internal_only)},
        {"composite",
         std::make_shared<CompositeModel>(std::vector<ModelPtr>{
             std::make_shared<CrttModel>(2.0), std::make_shared<AreaModel>(1.0, 93000.0),
             std::make_shared<AngleModel>(1.0, 200.0, AngleVertices::all_non_corner, AngleForm::deficit)})},
    };
    bool ok = true;
    std::string detail;
    std::uint64_t seed = 1100;
    for (const auto& [name, model] : models) {
        Chain chain(TTessellation::empty(unit_square()), model, {}, ++seed);
        double e_inc = chain.energy();
        double e_raw = model->energy(raw_as_stats(oracle::raw_stats(chain.tessellation())));
        std::size_t accepted = 0, bad = 0;
        double worst = 0.0;
        std::uint64_t steps = 0;
        while (accepted < 1000 && steps < 3000000) {
            ++steps;
            if (!chain.step()) {
                continue;
            }
            const double e_inc1 = chain.energy();
            const double e_raw1 = model->energy(raw_as_stats(oracle::raw_stats(chain.tessellation())));
            const double dev = std::abs((e_inc1 - e_inc) - (e_raw1 - e_raw));
            const double bound = 1e-8 * (1.0 + std::abs(e_raw1));
            worst = std::max(worst, dev / bound);
            if (dev > bound) ++bad;
            e_inc = e_inc1;
            e_raw = e_raw1;
            ++accepted;
        }
        const bool this_ok = accepted >= 1000 && bad == 0;
        ok = ok && this_ok;
        detail += fmt("%s%s %zu accepted, %zu over bound (worst %.2e of bound)", detail.empty() ? "" : "; ", name,
                      accepted, bad, worst);
    }
    report(11, "incremental vs recomputed energy", ok, detail);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::function<void()>> criteria{structural_identities, invertibility, enumeration,
                                                      uniformity,            gnz_split,     gnz_flip,
                                                      detailed_balance,      poisson_lines, paper_anchors,
                                                      model_contrasts,       energy_consistency};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            std::printf("FAIL [%zu] exception: %s\n", i + 1, e.what());
            ++failures;
        }
    }
    std::printf("acceptance: %d failed, total %.1f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
