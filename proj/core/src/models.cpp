#include "ttess/models.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace ttess {

namespace {

double checked_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("model: tau must be positive and finite");
    }
    return tau;
}

double checked_weight(double w, const char* what) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument(std::string("model: ") + what + " must be non-negative and finite");
    }
    return w;
}

const double kLog2 = std::log(2.0);

}  // namespace

CrttModel::CrttModel(double tau) : tau_(checked_tau(tau)) {}

double CrttModel::energy(const Stats& s) const { return -static_cast<double>(s.nseint) * std::log(tau_); }

double CrttModel::energy_delta(const StatsDelta& d) const {
    return -static_cast<double>(d.nseint) * std::log(tau_);
}

std::optional<double> CrttModel::stability_constant() const { return std::max(tau_, 1.0); }

AcsModel::AcsModel(double tau) : tau_(checked_tau(tau)) {}

double AcsModel::energy(const Stats& s) const {
    return tau_ / kPi * s.total_edge_length + static_cast<double>(s.nveint) * kLog2 -
           static_cast<double>(s.nseint) * std::log(tau_);
}

double AcsModel::energy_delta(const StatsDelta& d) const {
    return tau_ / kPi * d.total_edge_length + static_cast<double>(d.nveint) * kLog2 -
           static_cast<double>(d.nseint) * std::log(tau_);
}

// The boundary term (tau/pi) l(D) is a constant; relative to it the extra energy
// terms are non-negative.
std::optional<double> AcsModel::stability_constant() const { return std::max(tau_, 1.0); }

AreaModel::AreaModel(double tau, double alpha) : tau_(checked_tau(tau)), alpha_(checked_weight(alpha, "alpha")) {}

double AreaModel::energy(const Stats& s) const {
    return -static_cast<double>(s.nseint) * std::log(tau_) + alpha_ * s.sum_sq_cell_area;
}

double AreaModel::energy_delta(const StatsDelta& d) const {
    return -static_cast<double>(d.nseint) * std::log(tau_) + alpha_ * d.sum_sq_cell_area;
}

std::optional<double> AreaModel::stability_constant() const { return std::max(tau_, 1.0); }

AngleModel::AngleModel(double tau, double beta, AngleVertices vertices, AngleForm form)
    : tau_(checked_tau(tau)), beta_(checked_weight(beta, "beta")), vertices_(vertices), form_(form) {}

namespace {

// Angle sum and number of vertices entering it, from totals or deltas.
template <class S>
std::pair<double, double> angle_terms(const S& s, AngleVertices vs) {
    if (vs == AngleVertices::all_non_corner) {
        return {s.sum_vertex_angles, 2.0 * static_cast<double>(s.nseint)};
    }
    return {s.sum_internal_vertex_angles, static_cast<double>(s.nveint)};
}

}  // namespace

double AngleModel::energy(const Stats& s) const {
    const auto [phi, n] = angle_terms(s, vertices_);
    const double angle = form_ == AngleForm::reward ? -beta_ * phi : beta_ * (kPi / 2.0 * n - phi);
    return -static_cast<double>(s.nseint) * std::log(tau_) + angle;
}

double AngleModel::energy_delta(const StatsDelta& d) const {
    const auto [phi, n] = angle_terms(d, vertices_);
    const double angle = form_ == AngleForm::reward ? -beta_ * phi : beta_ * (kPi / 2.0 * n - phi);
    return -static_cast<double>(d.nseint) * std::log(tau_) + angle;
}

// Two T-vertices per segment, each angle at most pi/2.
std::optional<double> AngleModel::stability_constant() const {
    if (form_ == AngleForm::deficit) {
        return std::max(tau_, 1.0);
    }
    return std::max(tau_ * std::exp(beta_ * kPi), 1.0);
}

CompositeModel::CompositeModel(std::vector<ModelPtr> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw std::invalid_argument("composite model needs at least one component");
    }
    for (const auto& p : parts_) {
        if (!p) {
            throw std::invalid_argument("composite model: null component");
        }
    }
}

double CompositeModel::energy(const Stats& s) const {
    double e = 0.0;
    for (const auto& p : parts_) {
        e += p->energy(s);
    }
    return e;
}

double CompositeModel::energy_delta(const StatsDelta& d) const {
    double e = 0.0;
    for (const auto& p : parts_) {
        e += p->energy_delta(d);
    }
    return e;
}

bool CompositeModel::strictly_positive() const {
    for (const auto& p : parts_) {
        if (!p->strictly_positive()) {
            return false;
        }
    }
    return true;
}

std::optional<double> CompositeModel::stability_constant() const {
    double k = 1.0;
    for (const auto& p : parts_) {
        const auto kp = p->stability_constant();
        if (!kp) {
            return std::nullopt;
        }
        k *= *kp;
    }
    return k;
}

bool is_hereditary(const EnergyModel& m) { return m.strictly_positive(); }

ModelPtr make_model(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto allow = [&](std::set<std::string> keys) {
        for (const auto& [k, v] : params) {
            if (!keys.count(k)) {
                throw std::invalid_argument("model '" + name + "': unknown parameter '" + k + "'");
            }
        }
    };
    if (name == "crtt") {
        allow({"tau"});
        return std::make_shared<CrttModel>(get("tau", 1.0));
    }
    if (name == "acs") {
        allow({"tau"});
        return std::make_shared<AcsModel>(get("tau", 1.0));
    }
    if (name == "area") {
        allow({"tau", "alpha"});
        return std::make_shared<AreaModel>(get("tau", 1.0), get("alpha", 0.0));
    }
    if (name == "angle") {
        allow({"tau", "beta", "internal_only", "deficit"});
        const auto vs = get("internal_only", 0.0) != 0.0 ? AngleVertices::internal_only : AngleVertices::all_non_corner;
        const auto form = get("deficit", 0.0) != 0.0 ? AngleForm::deficit : AngleForm::reward;
        return std::make_shared<AngleModel>(get("tau", 1.0), get("beta", 0.0), vs, form);
    }
    throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace ttess
