#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ttess/tessellation.hpp"

namespace ttess {

class UpdateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Division of a cell by the chord a line cuts through it.
struct Split {
    CellId cell = kNone;
    Line line;
};

/// Removal of a non-blocking (single-edge) internal segment.
struct Merge {
    SegmentId segment = kNone;
};

/// Removal of the terminal edge of a blocking segment at one of its ends, with
/// the segment blocked at the inner vertex of that edge extended until the next
/// segment. `end` is 0 for the end with the lowest coordinate along the line.
struct Flip {
    SegmentId segment = kNone;
    int end = 0;
};

using Update = std::variant<Split, Merge, Flip>;

enum class UpdateKind { split = 0, merge = 1, flip = 2 };

UpdateKind kind_of(const Update& u);
const char* to_string(UpdateKind k);

/// Geometry of an applicable split, computed without mutating the tessellation.
struct SplitPlan {
    CellId cell = kNone;
    Line line;
    Point a, b;                       // chord end points
    VertexId a_from = kNone, a_to = kNone;  // ring edge carrying a
    VertexId b_from = kNone, b_to = kNone;  // ring edge carrying b
    SegmentId a_host = kNone, b_host = kNone;
    int xi = 0;  // internal non-blocking segments the chord ends land on
    double length = 0.0;
};

struct MergePlan {
    SegmentId segment = kNone;
    VertexId a = kNone, b = kNone;
    SegmentId a_host = kNone, b_host = kNone;
    double length = 0.0;
};

struct FlipPlan {
    SegmentId segment = kNone;
    int end = 0;
    VertexId v = kNone;          // end vertex removed with the terminal edge
    VertexId w = kNone;          // inner vertex of the terminal edge
    SegmentId blocked = kNone;   // segment ending at w, extended by the flip
    SegmentId v_host = kNone;    // segment v lies on
    SegmentId x_host = kNone;    // segment the extension stops on
    Point x;                     // new end of the extended segment
    double removed_length = 0.0;
    double added_length = 0.0;
};

std::optional<SplitPlan> plan_split(const TTessellation& t, const Split& s);
std::optional<MergePlan> plan_merge(const TTessellation& t, const Merge& m);
std::optional<FlipPlan> plan_flip(const TTessellation& t, const Flip& f);
bool applicable(const TTessellation& t, const Update& u);

struct UpdateReceipt {
    UpdateKind kind = UpdateKind::split;
    Update inverse;
    StatsDelta delta;
    int xi = 0;                   // splits only
    double removed_length = 0.0;  // merge: l(M); flip: removed terminal edge
    double added_length = 0.0;    // split: chord; flip: extension
    std::vector<CellId> touched_cells;
    std::vector<SegmentId> touched_segments;
};

/// Applies u, keeping statistics and indices current. Throws UpdateError, with t
/// unchanged, when u is not applicable.
UpdateReceipt apply_update(TTessellation& t, const Update& u);

/// Undoes a receipt: applies its inverse and restores the statistics snapshot
/// taken before the update so no rounding accumulates.
void revert(TTessellation& t, const UpdateReceipt& r, const Stats& before);

std::vector<Merge> enumerate_merges(const TTessellation& t);
std::vector<Flip> enumerate_flips(const TTessellation& t);

/// Uniform split: cell with probability proportional to its perimeter, then a
/// uniform isotropic line hitting it. Degenerate chords are redrawn.
Split sample_uniform_split(const TTessellation& t, Rng& rng);

/// Densities of the uniform proposals: pi / (2 l(T) - l(D)), 1 / nnbseint and
/// 1 / (2 nbseint). The last two throw when the update set is empty.
double split_density_uniform(const TTessellation& t);
double merge_pmf_uniform(const TTessellation& t);
double flip_pmf_uniform(const TTessellation& t);

/// Number of internal non-blocking segments the chord's end points land on.
int xi(const TTessellation& t, const Split& s);

/// Empties t by merges and flips: merge while a non-blocking segment exists,
/// otherwise shorten a blocking segment by flips at one end until it can be
/// merged. Returns the number of updates; throws if max_steps is exceeded.
std::size_t greedy_empty(TTessellation& t, std::size_t max_steps);

}  // namespace ttess
