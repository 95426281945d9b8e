#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttess/operators.hpp"
#include "ttess/tessellation.hpp"

namespace ttess {

/// Gibbs energy -log h(T), defined up to an additive constant. Every built-in
/// energy is an affine function of the cached statistics, so the change caused by
/// an update follows from its StatsDelta alone.
class EnergyModel {
public:
    virtual ~EnergyModel() = default;

    virtual std::string name() const = 0;
    virtual double energy(const Stats& s) const = 0;
    virtual double energy_delta(const StatsDelta& d) const = 0;
    /// h > 0 on every tessellation.
    virtual bool strictly_positive() const { return true; }
    /// K with h(T) <= K^nseint(T), when one is known.
    virtual std::optional<double> stability_constant() const = 0;

    double energy(const TTessellation& t) const { return energy(t.stats()); }
    /// log h(UT) - log h(T) for an applied update.
    double log_h_ratio(const UpdateReceipt& r) const { return -energy_delta(r.delta); }
};

using ModelPtr = std::shared_ptr<const EnergyModel>;

/// Completely random T-tessellation: energy -nseint log tau.
class CrttModel final : public EnergyModel {
public:
    explicit CrttModel(double tau);
    std::string name() const override { return "crtt"; }
    using EnergyModel::energy;
    double energy(const Stats& s) const override;
    double energy_delta(const StatsDelta& d) const override;
    std::optional<double> stability_constant() const override;
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Arak-Clifford-Surgailis type model:
/// (tau/pi) l(T) + nveint log 2 - nseint log tau.
class AcsModel final : public EnergyModel {
public:
    explicit AcsModel(double tau);
    std::string name() const override { return "acs"; }
    using EnergyModel::energy;
    double energy(const Stats& s) const override;
    double energy_delta(const StatsDelta& d) const override;
    std::optional<double> stability_constant() const override;
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Penalty on the sum of squared cell areas: -nseint log tau + alpha a^2(T).
class AreaModel final : public EnergyModel {
public:
    AreaModel(double tau, double alpha);
    std::string name() const override { return "area"; }
    using EnergyModel::energy;
    double energy(const Stats& s) const override;
    double energy_delta(const StatsDelta& d) const override;
    std::optional<double> stability_constant() const override;

private:
    double tau_;
    double alpha_;
};

enum class AngleVertices { all_non_corner, internal_only };

/// `reward`: -nseint log tau - beta sum phi(v).
/// `deficit`: -nseint log tau + beta sum (pi/2 - phi(v)).
/// Over all non-corner vertices there are exactly 2 nseint terms, so the two
/// differ by the reparametrization tau_reward = tau_deficit * exp(beta pi).
enum class AngleForm { reward, deficit };

class AngleModel final : public EnergyModel {
public:
    AngleModel(double tau, double beta, AngleVertices vertices = AngleVertices::all_non_corner,
               AngleForm form = AngleForm::reward);
    std::string name() const override { return "angle"; }
    using EnergyModel::energy;
    double energy(const Stats& s) const override;
    double energy_delta(const StatsDelta& d) const override;
    std::optional<double> stability_constant() const override;

private:
    double tau_;
    double beta_;
    AngleVertices vertices_;
    AngleForm form_;
};

/// Sum of component energies.
class CompositeModel final : public EnergyModel {
public:
    explicit CompositeModel(std::vector<ModelPtr> parts);
    std::string name() const override { return "composite"; }
    using EnergyModel::energy;
    double energy(const Stats& s) const override;
    double energy_delta(const StatsDelta& d) const override;
    bool strictly_positive() const override;
    std::optional<double> stability_constant() const override;
    const std::vector<ModelPtr>& parts() const { return parts_; }

private:
    std::vector<ModelPtr> parts_;
};

/// h > 0 everywhere implies the hereditary property.
bool is_hereditary(const EnergyModel& m);

/// Builds a built-in model from its name and scalar parameters: crtt(tau),
/// acs(tau), area(tau, alpha), angle(tau, beta, internal_only, deficit). Missing tau
/// defaults to 1, other missing weights to 0. Unknown names or parameters throw
/// std::invalid_argument.
ModelPtr make_model(const std::string& name, const std::map<std::string, double>& params);

}  // namespace ttess
