#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ttess/line_pattern.hpp"
#include "ttess/sampler.hpp"
#include "ttess/tessellation.hpp"

namespace ttess {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TraceRecord {
    std::uint64_t iteration = 0;
    double energy = 0.0;
    MoveCounts counts;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

TraceRecord make_trace_record(const Chain& chain);

/// Row of the trace CSV: acceptance rates per update type so far.
struct TraceRow {
    std::uint64_t iteration = 0;
    double energy = 0.0;
    double acc_split = 0.0;
    double acc_merge = 0.0;
    double acc_flip = 0.0;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

TraceRow to_row(const TraceRecord& r);

struct SurvivalCurve {
    std::vector<std::uint64_t> lags;
    std::vector<double> fraction;
};

using LorenzCurve = std::vector<std::pair<double, double>>;

/// Points (i/n, share of the i smallest areas) for i = 1..n.
LorenzCurve lorenz_curve(std::vector<double> areas);
/// Piecewise-linear value of the curve at x, with (0, 0) prepended.
double lorenz_at(const LorenzCurve& curve, double x);
/// Reference curve y = x^2 sampled at the same abscissae.
LorenzCurve lorenz_reference(const LorenzCurve& curve);

/// Internal segments of a state as canonical_segments() rows (theta, p, t0, t1).
using SegmentSet = std::vector<std::array<double, 4>>;

/// What counts as the same segment in two snapshots. `geometry` requires the same
/// supporting line and end points, so a flip changes the two segments involved;
/// `line` only compares supporting lines.
enum class SegmentIdentity { geometry, line };

/// Fraction of segments of snapshot t still present in snapshot t + lag, averaged
/// over t; lags are counted in snapshots. Empty snapshots are skipped.
SurvivalCurve segment_survival(const std::vector<SegmentSet>& snapshots, const std::vector<std::uint64_t>& lags,
                               SegmentIdentity identity = SegmentIdentity::geometry, double tol = 1e-9);
/// Line-identity survival from line patterns.
SurvivalCurve segment_survival(const std::vector<LinePattern>& snapshots, const std::vector<std::uint64_t>& lags,
                               const Tolerance& tol = {});

struct AngleHistogram {
    std::vector<double> edges;  // bins + 1 edges spanning [0, pi/2]
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
    /// Empirical CDF at each upper bin edge.
    std::vector<double> cdf() const;
};

AngleHistogram angle_histogram(const std::vector<double>& angles, std::size_t bins = 32);

// CSV files carry a header row naming the columns.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);
std::vector<TraceRow> read_trace_csv(std::istream& in);
void write_survival_csv(std::ostream& out, const SurvivalCurve& curve);
void write_lorenz_csv(std::ostream& out, const LorenzCurve& curve);
void write_angles_csv(std::ostream& out, const AngleHistogram& hist);

struct SvgOptions {
    double pixels = 600.0;
    bool color_blocking = true;
};

/// SVG 1.1 drawing in domain coordinates (y up). Output is a deterministic
/// function of the geometry.
std::string render_svg(const TTessellation& t, const SvgOptions& opt = {});

/// Writes text to a file, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ttess
