#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttess/enumerate.hpp"
#include "ttess/models.hpp"
#include "ttess/operators.hpp"

namespace ttess {

/// State-independent update-type probabilities; the remainder 1 - sum is a no-op.
struct ProposalConfig {
    double p_split = 1.0 / 3.0;
    double p_merge = 1.0 / 3.0;
    double p_flip = 1.0 / 3.0;

    /// Throws std::invalid_argument on negative entries or a sum above 1.
    void validate() const;
};

/// Per-type proposal and acceptance tallies, indexed by UpdateKind.
struct MoveCounts {
    std::array<std::uint64_t, 3> proposed{};
    std::array<std::uint64_t, 3> accepted{};

    double rate(UpdateKind k) const;
};

/// log of the Hastings ratio of an update already applied to a tessellation whose
/// pre-update statistics were `before`. -infinity when the reverse proposal is
/// structurally impossible.
double log_hastings_ratio(const EnergyModel& model, const ProposalConfig& prop, const Stats& before,
                          double domain_perimeter, const UpdateReceipt& r);
double hastings_ratio(const EnergyModel& model, const ProposalConfig& prop, const Stats& before,
                      double domain_perimeter, const UpdateReceipt& r);

/// Outcome of the last call to Chain::step().
struct StepInfo {
    std::optional<UpdateKind> kind;  // empty for the idle draw
    bool applicable = false;
    bool accepted = false;
    double log_ratio = 0.0;
};

/// One Metropolis-Hastings-Green chain with uniform proposals.
class Chain {
public:
    Chain(TTessellation initial, ModelPtr model, ProposalConfig proposals, std::uint64_t seed);

    bool step();
    /// Runs n steps; `callback` fires after every `period`-th step when period > 0.
    void run(std::uint64_t n, const std::function<void(const Chain&)>& callback = {}, std::uint64_t period = 0);

    const TTessellation& tessellation() const { return t_; }
    TTessellation& mutable_tessellation() { return t_; }
    const EnergyModel& model() const { return *model_; }
    const ModelPtr& model_ptr() const { return model_; }
    const ProposalConfig& proposals() const { return prop_; }
    double energy() const { return model_->energy(t_.stats()); }
    std::uint64_t iteration() const { return iteration_; }
    const MoveCounts& counts() const { return counts_; }
    const StepInfo& last_step() const { return last_; }
    Rng& rng() { return rng_; }

    /// Runs validate() every k-th iteration (0 disables) and throws on violation.
    void set_validate_period(std::uint64_t k) { validate_period_ = k; }

private:
    TTessellation t_;
    ModelPtr model_;
    ProposalConfig prop_;
    Rng rng_;
    std::uint64_t iteration_ = 0;
    std::uint64_t validate_period_ = 0;
    MoveCounts counts_;
    StepInfo last_;
};

struct ConvergenceReport {
    bool h_positive = false;
    bool irreducible = false;  // uniform proposals with h > 0 and p_split, p_merge > 0
    bool aperiodic = false;    // p_merge > 0 or p_flip > 0
    enum class Verdict { convergent, not_established, unknown } verdict = Verdict::unknown;
    std::vector<std::string> notes;
};

ConvergenceReport check_convergence_conditions(const EnergyModel& model, const ProposalConfig& prop);
const char* to_string(ConvergenceReport::Verdict v);

struct SamplingOptions {
    Polygon domain = unit_square();
    std::uint64_t n_states = 10000;
    std::uint64_t subsample = 100;
    std::uint64_t burn_in = 0;  // 0 selects 10 x the expected number of segments, at least 1000
    std::uint64_t batches = 50;
    int split_draws = 10;
    ProposalConfig proposals;
    std::uint64_t seed = 1;
};

struct GnzReport {
    std::string functional;
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    double diff_se = 0.0;   // batch-means SE of the per-state difference
    std::uint64_t n_states = 0;

    double combined_se() const;
    /// |lhs - rhs| measured in combined standard errors.
    double z() const;
};

/// phi(s, T) for a split s of T.
using SplitFunctional = std::function<double(const TTessellation&, const Split&)>;
/// phi(F, T) for a flip F of T with its dry-run geometry.
using FlipFunctional = std::function<double(const TTessellation&, const Flip&, const FlipPlan&)>;

/// Split identity: E sum_{m in M(T)} phi(m^-1, T\m) = E int phi(s, T) h(T+s)/h(T) ds.
GnzReport verify_gnz_split(const ModelPtr& model, const SplitFunctional& phi, const std::string& phi_name,
                           const SamplingOptions& opt);
/// Flip identity: E sum_F phi(F^-1, FT) = E sum_F phi(F, T) h(FT)/h(T).
GnzReport verify_gnz_flip(const ModelPtr& model, const FlipFunctional& phi, const std::string& phi_name,
                          const SamplingOptions& opt);

struct UniformityReport {
    std::size_t states = 0;
    std::vector<std::uint64_t> counts;
    double chi2 = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    bool flip_graph_connected = true;
};

/// Flip-only Metropolis chain on the tessellations supported by `pattern`,
/// compared with the uniform law over the enumerated states. Throws
/// EnumerationError when the flip graph is not connected.
UniformityReport conditional_uniformity_test(const LinePattern& pattern, std::uint64_t n_states,
                                             std::uint64_t subsample, std::uint64_t seed);

/// Batch-means standard error of the mean of xs.
double batch_means_se(const std::vector<double>& xs, std::size_t batches);

}  // namespace ttess
