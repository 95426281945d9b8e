#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "ttess/tessellation.hpp"

namespace ttess::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kVerdictUnknown = 3 };

/// Snapshot stream: repeated "state <iteration>" headers, each followed by a
/// tessellation record.
void write_snapshot(std::ostream& out, std::uint64_t iteration, const TTessellation& t);
std::vector<std::pair<std::uint64_t, TTessellation>> read_snapshots(std::istream& in);

/// Runs the chain from the empty tessellation of the configured domain and writes
/// the requested artifacts under cfg.output.dir.
int cmd_simulate(const RunConfig& cfg);

/// Runs `replicates` independent chains in parallel; replicate i uses seed + i and
/// writes to <dir>/rep_<i>.
int cmd_simulate_replicates(const RunConfig& cfg, unsigned replicates);

/// Convergence conditions, GNZ split and flip checks and conditional uniformity
/// tests; writes verify.json.
int cmd_verify(const RunConfig& cfg);

int cmd_render(const std::filesystem::path& state, const std::filesystem::path& out, double pixels);

struct StatsRequest {
    std::filesystem::path state;      // optional when snapshots are given
    std::filesystem::path snapshots;  // optional
    std::filesystem::path out_dir;
    std::vector<std::uint64_t> lags;  // in iterations
    std::size_t bins = 32;
};

/// Writes lorenz.csv, angles.csv and survival.csv.
int cmd_stats(const StatsRequest& req);

}  // namespace ttess::cli
