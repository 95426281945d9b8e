#include "ttess/sampler.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace ttess {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) {
        s += x;
    }
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace

void ProposalConfig::validate() const {
    if (p_split < 0.0 || p_merge < 0.0 || p_flip < 0.0) {
        throw std::invalid_argument("proposal probabilities must be non-negative");
    }
    if (p_split + p_merge + p_flip > 1.0 + 1e-12) {
        throw std::invalid_argument("proposal probabilities sum above 1");
    }
}

double MoveCounts::rate(UpdateKind k) const {
    const auto i = static_cast<std::size_t>(k);
    return proposed[i] == 0 ? 0.0 : static_cast<double>(accepted[i]) / static_cast<double>(proposed[i]);
}

double log_hastings_ratio(const EnergyModel& model, const ProposalConfig& prop, const Stats& before,
                          double domain_perimeter, const UpdateReceipt& r) {
    const double log_h = model.log_h_ratio(r);
    switch (r.kind) {
        case UpdateKind::split: {
            const double denom = kPi * static_cast<double>(before.nnbseint + 1 - r.xi);
            return log_h + safe_log(prop.p_merge) - safe_log(prop.p_split) +
                   safe_log(2.0 * before.total_edge_length - domain_perimeter) - safe_log(denom);
        }
        case UpdateKind::merge: {
            const double denom = 2.0 * (before.total_edge_length - r.removed_length) - domain_perimeter;
            return log_h + safe_log(prop.p_split) - safe_log(prop.p_merge) +
                   safe_log(kPi * static_cast<double>(before.nnbseint)) - safe_log(denom);
        }
        case UpdateKind::flip: {
            const long nb_after = before.nbseint + r.delta.nbseint;
            return log_h + safe_log(static_cast<double>(before.nbseint)) - safe_log(static_cast<double>(nb_after));
        }
    }
    return kNegInf;
}

double hastings_ratio(const EnergyModel& model, const ProposalConfig& prop, const Stats& before,
                      double domain_perimeter, const UpdateReceipt& r) {
    return std::exp(log_hastings_ratio(model, prop, before, domain_perimeter, r));
}

// --- chain -----------------------------------------------------------------

Chain::Chain(TTessellation initial, ModelPtr model, ProposalConfig proposals, std::uint64_t seed)
    : t_(std::move(initial)), model_(std::move(model)), prop_(proposals), rng_(seed) {
    if (!model_) {
        throw std::invalid_argument("Chain: null model");
    }
    prop_.validate();
}

bool Chain::step() {
    ++iteration_;
    last_ = StepInfo{};
    const double u = uniform01(rng_);
    UpdateKind kind;
    if (u < prop_.p_split) {
        kind = UpdateKind::split;
    } else if (u < prop_.p_split + prop_.p_merge) {
        kind = UpdateKind::merge;
    } else if (u < prop_.p_split + prop_.p_merge + prop_.p_flip) {
        kind = UpdateKind::flip;
    } else {
        return false;
    }
    last_.kind = kind;
    ++counts_.proposed[static_cast<std::size_t>(kind)];

    Update update;
    switch (kind) {
        case UpdateKind::split:
            update = sample_uniform_split(t_, rng_);
            break;
        case UpdateKind::merge: {
            const auto nb = t_.nonblocking_segments();
            if (nb.empty()) {
                return false;
            }
            update = Merge{nb[uniform_index(rng_, nb.size())]};
            break;
        }
        case UpdateKind::flip: {
            const auto b = t_.blocking_segments();
            if (b.empty()) {
                return false;
            }
            const SegmentId s = b[uniform_index(rng_, b.size())];
            const int end = static_cast<int>(uniform_index(rng_, 2));
            update = Flip{s, end};
            // Extension ending on an existing vertex: measure zero, rejected.
            if (!plan_flip(t_, std::get<Flip>(update))) {
                return false;
            }
            break;
        }
    }
    last_.applicable = true;

    const Stats before = t_.stats();
    const UpdateReceipt receipt = apply_update(t_, update);
    last_.log_ratio = log_hastings_ratio(*model_, prop_, before, t_.domain_perimeter(), receipt);
    const bool accept = last_.log_ratio >= 0.0 || std::log(uniform01(rng_)) < last_.log_ratio;
    if (accept) {
        ++counts_.accepted[static_cast<std::size_t>(kind)];
    } else {
        revert(t_, receipt, before);
    }
    last_.accepted = accept;

    if (validate_period_ > 0 && iteration_ % validate_period_ == 0) {
        const auto rep = validate(t_);
        if (!rep.ok()) {
            throw std::logic_error("chain state invalid at iteration " + std::to_string(iteration_) + ": " +
                                   rep.summary());
        }
    }
    return accept;
}

void Chain::run(std::uint64_t n, const std::function<void(const Chain&)>& callback, std::uint64_t period) {
    for (std::uint64_t i = 0; i < n; ++i) {
        step();
        if (callback && period > 0 && iteration_ % period == 0) {
            callback(*this);
        }
    }
}

// --- convergence -------------------------------------------------------------

ConvergenceReport check_convergence_conditions(const EnergyModel& model, const ProposalConfig& prop) {
    ConvergenceReport rep;
    rep.h_positive = model.strictly_positive();
    rep.aperiodic = prop.p_merge > 0.0 || prop.p_flip > 0.0;
    rep.irreducible = rep.h_positive && prop.p_split > 0.0 && prop.p_merge > 0.0;
    if (!rep.h_positive) {
        rep.notes.push_back("density not known to be strictly positive; irreducibility needs a manual check");
    }
    if (prop.p_split <= 0.0 || prop.p_merge <= 0.0) {
        rep.notes.push_back("p_split and p_merge must both be positive to reach and leave the empty tessellation");
    }
    if (!rep.aperiodic) {
        rep.notes.push_back("p_merge = p_flip = 0: aperiodicity not established");
    }
    if (!rep.h_positive) {
        rep.verdict = ConvergenceReport::Verdict::unknown;
    } else if (rep.irreducible && rep.aperiodic) {
        rep.verdict = ConvergenceReport::Verdict::convergent;
    } else {
        rep.verdict = ConvergenceReport::Verdict::not_established;
    }
    return rep;
}

const char* to_string(ConvergenceReport::Verdict v) {
    switch (v) {
        case ConvergenceReport::Verdict::convergent:
            return "convergent";
        case ConvergenceReport::Verdict::not_established:
            return "not-established";
        case ConvergenceReport::Verdict::unknown:
            return "unknown";
    }
    return "?";
}

// --- GNZ verifiers -------------------------------------------------------------

double batch_means_se(const std::vector<double>& xs, std::size_t batches) {
    const std::size_t n = xs.size();
    if (n < 2) {
        return 0.0;
    }
    batches = std::max<std::size_t>(2, std::min(batches, n));
    const std::size_t size = n / batches;
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * size; i < (b + 1) * size; ++i) {
            s += xs[i];
        }
        means.push_back(s / static_cast<double>(size));
    }
    const double m = mean_of(means);
    double v = 0.0;
    for (double x : means) {
        v += (x - m) * (x - m);
    }
    v /= static_cast<double>(batches - 1);
    return std::sqrt(v / static_cast<double>(batches));
}

double GnzReport::combined_se() const { return std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se); }

double GnzReport::z() const {
    const double se = combined_se();
    const double d = std::abs(lhs - rhs);
    if (se == 0.0) {
        return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return d / se;
}

namespace {

Chain warmed_chain(const ModelPtr& model, const SamplingOptions& opt) {
    if (!is_hereditary(*model)) {
        throw std::invalid_argument("GNZ verification needs a hereditary model");
    }
    Chain chain(TTessellation::empty(opt.domain), model, opt.proposals, opt.seed);
    std::uint64_t burn = opt.burn_in;
    if (burn == 0) {
        chain.run(1000);
        burn = 10 * static_cast<std::uint64_t>(chain.tessellation().stats().nseint + 1);
    }
    chain.run(burn);
    return chain;
}

GnzReport summarize(const std::string& name, const std::vector<double>& l, const std::vector<double>& r,
                    std::size_t batches) {
    GnzReport rep;
    rep.functional = name;
    rep.n_states = l.size();
    rep.lhs = mean_of(l);
    rep.rhs = mean_of(r);
    rep.lhs_se = batch_means_se(l, batches);
    rep.rhs_se = batch_means_se(r, batches);
    std::vector<double> d(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        d[i] = l[i] - r[i];
    }
    rep.diff_se = batch_means_se(d, batches);
    return rep;
}

}  // namespace

GnzReport verify_gnz_split(const ModelPtr& model, const SplitFunctional& phi, const std::string& phi_name,
                           const SamplingOptions& opt) {
    Chain chain = warmed_chain(model, opt);
    Rng aux(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<double> lhs, rhs;
    lhs.reserve(opt.n_states);
    rhs.reserve(opt.n_states);
    for (std::uint64_t n = 0; n < opt.n_states; ++n) {
        chain.run(opt.subsample);
        TTessellation work = chain.tessellation();

        double l = 0.0;
        for (const Merge& m : enumerate_merges(work)) {
            const Stats before = work.stats();
            const UpdateReceipt rc = apply_update(work, m);
            l += phi(work, std::get<Split>(rc.inverse));
            revert(work, rc, before);
        }

        const double mass = (2.0 * work.stats().total_edge_length - work.domain_perimeter()) / kPi;
        double r = 0.0;
        for (int j = 0; j < opt.split_draws; ++j) {
            const Split s = sample_uniform_split(work, aux);
            const double f = phi(work, s);
            if (f == 0.0) {
                continue;
            }
            const Stats before = work.stats();
            const UpdateReceipt rc = apply_update(work, s);
            r += f * std::exp(model->log_h_ratio(rc));
            revert(work, rc, before);
        }
        lhs.push_back(l);
        rhs.push_back(mass * r / static_cast<double>(opt.split_draws));
    }
    return summarize(phi_name, lhs, rhs, opt.batches);
}

GnzReport verify_gnz_flip(const ModelPtr& model, const FlipFunctional& phi, const std::string& phi_name,
                          const SamplingOptions& opt) {
    Chain chain = warmed_chain(model, opt);
    std::vector<double> lhs, rhs;
    lhs.reserve(opt.n_states);
    rhs.reserve(opt.n_states);
    for (std::uint64_t n = 0; n < opt.n_states; ++n) {
        chain.run(opt.subsample);
        TTessellation work = chain.tessellation();
        double l = 0.0;
        double r = 0.0;
        for (const Flip& f : enumerate_flips(work)) {
            const auto plan = plan_flip(work, f);
            if (!plan) {
                continue;
            }
            const double fr = phi(work, f, *plan);
            const Stats before = work.stats();
            const UpdateReceipt rc = apply_update(work, f);
            r += fr * std::exp(model->log_h_ratio(rc));
            const Flip inv = std::get<Flip>(rc.inverse);
            const auto inv_plan = plan_flip(work, inv);
            if (inv_plan) {
                l += phi(work, inv, *inv_plan);
            }
            revert(work, rc, before);
        }
        lhs.push_back(l);
        rhs.push_back(r);
    }
    return summarize(phi_name, lhs, rhs, opt.batches);
}

// --- conditional uniformity ----------------------------------------------------

UniformityReport conditional_uniformity_test(const LinePattern& pattern, std::uint64_t n_states,
                                             std::uint64_t subsample, std::uint64_t seed) {
    const PatternLayout layout(pattern);
    const auto keys = enumerate_keys(layout);
    const auto graph = analyze_flip_graph(layout, keys);
    UniformityReport rep;
    rep.states = keys.size();
    rep.flip_graph_connected = graph.connected;
    if (!graph.connected || !graph.closed) {
        throw EnumerationError("flip graph of the pattern is not connected");
    }
    std::map<StateKey, std::size_t> index;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        index.emplace(keys[i], i);
    }
    rep.counts.assign(keys.size(), 0);

    TTessellation t = layout.build(keys.front());
    Rng rng(seed);
    // Lazy flip chain: a flip walk alone can be periodic on bipartite flip graphs.
    auto step = [&] {
        if (uniform01(rng) < 0.5) {
            return;
        }
        const auto b = t.blocking_segments();
        if (b.empty()) {
            return;
        }
        const Flip f{b[uniform_index(rng, b.size())], static_cast<int>(uniform_index(rng, 2))};
        if (!plan_flip(t, f)) {
            return;
        }
        const Stats before = t.stats();
        const UpdateReceipt rc = apply_update(t, f);
        const double log_r = std::log(static_cast<double>(before.nbseint)) -
                             std::log(static_cast<double>(t.stats().nbseint));
        if (!(log_r >= 0.0 || std::log(uniform01(rng)) < log_r)) {
            revert(t, rc, before);
        }
    };
    for (std::uint64_t n = 0; n < n_states; ++n) {
        for (std::uint64_t k = 0; k < subsample; ++k) {
            step();
        }
        const auto key = layout.key(t);
        const auto it = key ? index.find(*key) : index.end();
        if (it == index.end()) {
            throw std::logic_error("flip chain left the enumerated state set");
        }
        ++rep.counts[it->second];
    }
    const double expected = static_cast<double>(n_states) / static_cast<double>(keys.size());
    for (auto c : rep.counts) {
        const double d = static_cast<double>(c) - expected;
        rep.chi2 += d * d / expected;
    }
    rep.dof = static_cast<double>(keys.size()) - 1.0;
    rep.p_value = rep.dof > 0.0 ? boost::math::gamma_q(rep.dof / 2.0, rep.chi2 / 2.0) : 1.0;
    return rep;
}

}  // namespace ttess
