#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>

#include "commands.hpp"

namespace {

using namespace ttess::cli;

void init_logging() {
    spdlog::set_pattern("[%l] %v");
    if (const char* lvl = std::getenv("TTESS_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(lvl));
    }
}

struct Overrides {
    std::string config;
    std::uint64_t seed = 0;
    std::uint64_t iterations = 0;
    std::string out;
};

RunConfig resolve(const Overrides& o, CLI::App* cmd) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (cmd->count("--seed")) cfg.seed = o.seed;
    if (cmd->count("--iterations")) cfg.iterations = o.iterations;
    if (!o.out.empty()) cfg.output.dir = o.out;
    return cfg;
}

void add_run_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Seed (overrides the config)");
    cmd->add_option("--out", o.out, "Output directory (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
    init_logging();
    CLI::App app{"Gibbs random T-tessellations: simulation, verification and rendering"};
    app.require_subcommand(1);

    Overrides sim_o;
    unsigned replicates = 1;
    auto* sim = app.add_subcommand("simulate", "Run the Metropolis-Hastings-Green chain from the empty tessellation");
    add_run_flags(sim, sim_o);
    sim->add_option("--iterations", sim_o.iterations, "Number of iterations (overrides the config)");
    sim->add_option("--replicates", replicates, "Independent chains run in parallel")->check(CLI::PositiveNumber);

    Overrides ver_o;
    auto* ver = app.add_subcommand("verify", "GNZ identities, conditional uniformity and convergence conditions");
    add_run_flags(ver, ver_o);
    ver->add_option("--iterations", ver_o.iterations, "Unused by verify; accepted for symmetry");

    std::string render_in, render_out = "state.svg";
    double pixels = 600.0;
    auto* ren = app.add_subcommand("render", "Render a saved tessellation as SVG");
    ren->add_option("state", render_in, "Tessellation file")->required()->check(CLI::ExistingFile);
    ren->add_option("--out", render_out, "SVG output path");
    ren->add_option("--pixels", pixels, "Drawing size")->check(CLI::PositiveNumber);

    StatsRequest st;
    std::string run_dir;
    std::string out_dir;
    auto* sta = app.add_subcommand("stats", "Lorenz curve, angle histogram and segment survival of a saved run");
    sta->add_option("--run", run_dir, "Run directory holding final.ttess and snapshots.txt");
    sta->add_option("--state", st.state, "Tessellation file");
    sta->add_option("--snapshots", st.snapshots, "Snapshot file");
    sta->add_option("--out", out_dir, "Output directory (default: the run directory or '.')");
    sta->add_option("--lags", st.lags, "Survival lags in iterations")->delimiter(',');
    sta->add_option("--bins", st.bins, "Angle histogram bins")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return cmd_simulate_replicates(resolve(sim_o, sim), replicates);
        }
        if (ver->parsed()) {
            return cmd_verify(resolve(ver_o, ver));
        }
        if (ren->parsed()) {
            return cmd_render(render_in, render_out, pixels);
        }
        if (sta->parsed()) {
            if (!run_dir.empty()) {
                const std::filesystem::path dir = run_dir;
                if (st.state.empty() && std::filesystem::exists(dir / "final.ttess")) st.state = dir / "final.ttess";
                if (st.snapshots.empty() && std::filesystem::exists(dir / "snapshots.txt")) {
                    st.snapshots = dir / "snapshots.txt";
                }
            }
            st.out_dir = !out_dir.empty() ? out_dir : (!run_dir.empty() ? run_dir : ".");
            return cmd_stats(st);
        }
    } catch (const ConfigError& e) {
        spdlog::error("{}", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kConfigError;
    }
    return kOk;
}
