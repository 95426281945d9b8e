#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "ttess/monitor.hpp"
#include "ttess/sampler.hpp"
#include "ttess/tessellation_io.hpp"

namespace ttess::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_snapshot(std::ostream& out, std::uint64_t iteration, const TTessellation& t) {
    out << "state " << iteration << '\n';
    write_tessellation(out, t);
}

std::vector<std::pair<std::uint64_t, TTessellation>> read_snapshots(std::istream& in) {
    std::vector<std::pair<std::uint64_t, TTessellation>> out;
    std::string word;
    while (in >> word) {
        std::uint64_t it = 0;
        if (word != "state" || !(in >> it)) {
            throw FormatError("snapshots: expected 'state <iteration>' header after " +
                              std::to_string(out.size()) + " records");
        }
        out.emplace_back(it, read_tessellation(in));
    }
    return out;
}

namespace {

std::string to_text(const std::function<void(std::ostream&)>& write) {
    std::ostringstream ss;
    write(ss);
    return ss.str();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

ordered_json rates_json(const MoveCounts& c) {
    ordered_json j;
    for (auto k : {UpdateKind::split, UpdateKind::merge, UpdateKind::flip}) {
        const auto i = static_cast<std::size_t>(k);
        j[to_string(k)] = {{"proposed", c.proposed[i]}, {"accepted", c.accepted[i]}, {"rate", c.rate(k)}};
    }
    return j;
}

int run_one(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed) {
    ensure_dir(dir);
    const auto& o = cfg.output;
    Chain chain(TTessellation::empty(cfg.domain), build_model(cfg.model), cfg.proposals, seed);

    std::vector<TraceRow> trace{to_row(make_trace_record(chain))};
    std::ofstream snaps;
    if (o.snapshots) {
        snaps.open(dir / "snapshots.txt");
        if (!snaps) {
            throw IoError("cannot write " + (dir / "snapshots.txt").string());
        }
    }
    if (o.svg && o.svg_period > 0) {
        ensure_dir(dir / "svg");
    }
    spdlog::info("[{}] {} iterations, model {}, seed {}", dir.string(), cfg.iterations, chain.model().name(), seed);
    for (std::uint64_t i = 1; i <= cfg.iterations; ++i) {
        chain.step();
        if (o.trace && i % o.trace_period == 0) {
            trace.push_back(to_row(make_trace_record(chain)));
        }
        if (o.snapshots && i >= cfg.burn_in && i % o.snapshot_period == 0) {
            write_snapshot(snaps, i, chain.tessellation());
        }
        if (o.svg && o.svg_period > 0 && i % o.svg_period == 0) {
            write_text_file(dir / "svg" / ("state_" + std::to_string(i) + ".svg"), render_svg(chain.tessellation()));
        }
    }
    if (snaps.is_open()) {
        snaps.close();
        if (!snaps) {
            throw IoError("write failed: " + (dir / "snapshots.txt").string());
        }
    }
    const auto& t = chain.tessellation();
    if (o.trace) {
        write_text_file(dir / "trace.csv", to_text([&](std::ostream& s) { write_trace_csv(s, trace); }));
    }
    if (o.final_state) {
        write_text_file(dir / "final.ttess", to_text([&](std::ostream& s) { write_tessellation(s, t); }));
    }
    if (o.svg) {
        write_text_file(dir / "final.svg", render_svg(t));
    }
    const auto& c = chain.counts();
    ordered_json summary;
    summary["model"] = chain.model().name();
    summary["seed"] = seed;
    summary["iterations"] = chain.iteration();
    summary["energy"] = chain.energy();
    summary["nseint"] = t.stats().nseint;
    summary["cells"] = t.counts().nce;
    summary["acceptance"] = rates_json(c);
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");

    spdlog::info("[{}] done: {} segments, acceptance split {:.3f} merge {:.3f} flip {:.3f}", dir.string(),
                 t.stats().nseint, c.rate(UpdateKind::split), c.rate(UpdateKind::merge),
                 c.rate(UpdateKind::flip));
    for (auto k : {UpdateKind::split, UpdateKind::merge, UpdateKind::flip}) {
        if (c.proposed[static_cast<std::size_t>(k)] > 0 && c.rate(k) < 0.05) {
            spdlog::warn("[{}] low {} acceptance rate {:.4f}", dir.string(), to_string(k), c.rate(k));
        }
    }
    return kOk;
}

// Mean Lorenz curve over states on a regular grid.
LorenzCurve mean_lorenz(const std::vector<const TTessellation*>& states, std::size_t points = 100) {
    LorenzCurve out;
    for (std::size_t k = 1; k <= points; ++k) {
        out.emplace_back(static_cast<double>(k) / static_cast<double>(points), 0.0);
    }
    for (const auto* t : states) {
        const auto c = lorenz_curve(t->cell_areas());
        for (auto& [x, y] : out) {
            y += lorenz_at(c, x) / static_cast<double>(states.size());
        }
    }
    return out;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg) { return run_one(cfg, cfg.output.dir, cfg.seed); }

int cmd_simulate_replicates(const RunConfig& cfg, unsigned replicates) {
    if (replicates <= 1) {
        return cmd_simulate(cfg);
    }
    std::vector<int> codes(replicates, kOk);
    std::vector<std::string> errors(replicates);
    std::vector<std::thread> pool;
    for (unsigned r = 0; r < replicates; ++r) {
        pool.emplace_back([&, r] {
            char name[32];
            std::snprintf(name, sizeof name, "rep_%03u", r);
            try {
                codes[r] = run_one(cfg, cfg.output.dir / name, cfg.seed + r);
            } catch (const std::exception& e) {
                errors[r] = e.what();
                codes[r] = kConfigError;
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (unsigned r = 0; r < replicates; ++r) {
        if (!errors[r].empty()) {
            spdlog::error("replicate {}: {}", r, errors[r]);
        }
    }
    return *std::max_element(codes.begin(), codes.end());
}

int cmd_verify(const RunConfig& cfg) {
    const auto& v = cfg.verify;
    ensure_dir(cfg.output.dir);
    const ModelPtr model = build_model(cfg.model);
    const auto conv = check_convergence_conditions(*model, cfg.proposals);
    ordered_json report;
    report["model"] = model->name();
    report["convergence"] = {{"h_positive", conv.h_positive},
                             {"irreducible", conv.irreducible},
                             {"aperiodic", conv.aperiodic},
                             {"verdict", to_string(conv.verdict)},
                             {"notes", conv.notes}};
    spdlog::info("convergence verdict: {}", to_string(conv.verdict));
    for (const auto& n : conv.notes) {
        spdlog::info("  note: {}", n);
    }
    bool passed = true;
    report["gnz"] = ordered_json::array();
    report["uniformity"] = ordered_json::array();

    if (conv.verdict != ConvergenceReport::Verdict::unknown) {
        SamplingOptions opt;
        opt.domain = cfg.domain;
        opt.n_states = v.states;
        opt.subsample = v.subsample;
        opt.burn_in = cfg.burn_in;
        opt.split_draws = v.split_draws;
        opt.proposals = cfg.proposals;
        opt.seed = cfg.seed;
        auto record = [&](const GnzReport& g, const char* identity) {
            const bool ok = g.z() <= v.max_z;
            passed = passed && ok;
            report["gnz"].push_back({{"identity", identity},
                                     {"functional", g.functional},
                                     {"lhs", g.lhs},
                                     {"rhs", g.rhs},
                                     {"lhs_se", g.lhs_se},
                                     {"rhs_se", g.rhs_se},
                                     {"diff_se", g.diff_se},
                                     {"z", g.z()},
                                     {"states", g.n_states},
                                     {"pass", ok}});
            spdlog::info("GNZ {} [{}]: lhs {:.5f} rhs {:.5f} z {:.2f} -> {}", identity, g.functional, g.lhs, g.rhs,
                         g.z(), ok ? "pass" : "FAIL");
        };
        if (v.gnz_split) {
            record(verify_gnz_split(model, [](const TTessellation&, const Split&) { return 1.0; }, "one", opt),
                   "split");
        }
        if (v.gnz_flip) {
            record(verify_gnz_flip(
                       model, [](const TTessellation&, const Flip&, const FlipPlan& p) { return p.added_length; },
                       "added_length", opt),
                   "flip");
        }
    }
    for (std::size_t i = 0; i < v.patterns.size(); ++i) {
        const LinePattern pattern{v.patterns[i], cfg.domain};
        const auto u =
            conditional_uniformity_test(pattern, v.uniformity_states, v.uniformity_subsample, cfg.seed + i);
        const bool ok = u.p_value > v.min_p_value;
        passed = passed && ok;
        report["uniformity"].push_back({{"lines", pattern.size()},
                                        {"states", u.states},
                                        {"counts", u.counts},
                                        {"chi2", u.chi2},
                                        {"dof", u.dof},
                                        {"p_value", u.p_value},
                                        {"pass", ok}});
        spdlog::info("uniformity pattern {}: {} states, chi2 {:.3f}, p {:.4f} -> {}", i, u.states, u.chi2, u.p_value,
                     ok ? "pass" : "FAIL");
    }
    report["passed"] = passed;
    write_text_file(cfg.output.dir / "verify.json", report.dump(2) + "\n");
    if (!passed) {
        return kCheckFailed;
    }
    return conv.verdict == ConvergenceReport::Verdict::convergent ? kOk : kVerdictUnknown;
}

int cmd_render(const fs::path& state, const fs::path& out, double pixels) {
    std::istringstream in(read_text_file(state));
    const auto t = read_tessellation(in);
    SvgOptions opt;
    opt.pixels = pixels;
    write_text_file(out, render_svg(t, opt));
    return kOk;
}

int cmd_stats(const StatsRequest& req) {
    std::vector<std::pair<std::uint64_t, TTessellation>> snaps;
    if (!req.snapshots.empty()) {
        std::istringstream in(read_text_file(req.snapshots));
        snaps = read_snapshots(in);
    }
    std::optional<TTessellation> single;
    if (!req.state.empty()) {
        std::istringstream in(read_text_file(req.state));
        single = read_tessellation(in);
    }
    std::vector<const TTessellation*> states;
    for (const auto& s : snaps) {
        states.push_back(&s.second);
    }
    if (states.empty() && single) {
        states.push_back(&*single);
    }
    if (states.empty()) {
        throw std::invalid_argument("stats: no state or snapshots given");
    }
    ensure_dir(req.out_dir);

    const auto lorenz = mean_lorenz(states);
    write_text_file(req.out_dir / "lorenz.csv", to_text([&](std::ostream& s) { write_lorenz_csv(s, lorenz); }));

    std::vector<double> angles;
    for (const auto* t : states) {
        const auto a = t->segment_angles();
        angles.insert(angles.end(), a.begin(), a.end());
    }
    AngleHistogram hist;
    if (angles.empty()) {
        for (std::size_t k = 0; k <= req.bins; ++k) {
            hist.edges.push_back(kPi / 2.0 * static_cast<double>(k) / static_cast<double>(req.bins));
        }
        hist.counts.assign(req.bins, 0);
    } else {
        hist = angle_histogram(angles, req.bins);
    }
    write_text_file(req.out_dir / "angles.csv", to_text([&](std::ostream& s) { write_angles_csv(s, hist); }));

    SurvivalCurve curve;
    if (snaps.size() >= 2) {
        const std::uint64_t spacing = snaps[1].first - snaps[0].first;
        for (std::size_t i = 1; i < snaps.size(); ++i) {
            if (snaps[i].first - snaps[i - 1].first != spacing) {
                throw FormatError("snapshots: iterations are not evenly spaced");
            }
        }
        std::vector<std::uint64_t> lags_iter = req.lags;
        if (lags_iter.empty()) {
            lags_iter = {spacing, 5 * spacing, 10 * spacing, 50 * spacing};
        }
        std::vector<std::uint64_t> lags;
        for (auto l : lags_iter) {
            if (l % spacing != 0 || l / spacing >= snaps.size()) {
                spdlog::warn("survival lag {} skipped (snapshot spacing {}, {} snapshots)", l, spacing,
                             snaps.size());
                continue;
            }
            lags.push_back(l / spacing);
        }
        std::vector<SegmentSet> sets;
        for (const auto& s : snaps) {
            sets.push_back(canonical_segments(s.second));
        }
        if (!lags.empty()) {
            curve = segment_survival(sets, lags);
            for (auto& l : curve.lags) {
                l *= spacing;
            }
        }
    } else {
        spdlog::warn("survival needs at least two snapshots; writing an empty table");
    }
    write_text_file(req.out_dir / "survival.csv", to_text([&](std::ostream& s) { write_survival_csv(s, curve); }));
    return kOk;
}

}  // namespace ttess::cli
