#include "config.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

#include "ttess/monitor.hpp"

namespace ttess::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
        fail(path.empty() ? "<root>" : path, "expected an object");
    }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) {
            fail(join(path, k), "unknown key");
        }
    }
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) {
        fail(field, "expected a number");
    }
    return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        fail(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool boolean(const json& v, const std::string& field) {
    if (!v.is_boolean()) {
        fail(field, "expected true or false");
    }
    return v.get<bool>();
}

Point point(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) {
        fail(field, "expected [x, y]");
    }
    return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

Polygon parse_domain(const json& v, const std::string& field) {
    if (v.is_string()) {
        try {
            return parse_domain_name(v.get<std::string>());
        } catch (const ConfigError& e) {
            fail(field, e.what());
        }
    }
    allow_keys(v, field, {"polygon"});
    const auto it = v.find("polygon");
    if (it == v.end() || !it->is_array()) {
        fail(field + ".polygon", "expected an array of [x, y] vertices");
    }
    Polygon poly;
    for (std::size_t i = 0; i < it->size(); ++i) {
        poly.push_back(point((*it)[i], field + ".polygon[" + std::to_string(i) + "]"));
    }
    poly = make_ccw(std::move(poly));
    try {
        require_convex_ccw(poly, Tolerance::for_diameter(diameter(poly)));
    } catch (const GeometryError& e) {
        fail(field + ".polygon", e.what());
    }
    return poly;
}

ModelSpec parse_model(const json& v, const std::string& field) {
    allow_keys(v, field, {"name", "params", "parts", "form", "positive"});
    ModelSpec spec;
    if (v.contains("name")) {
        if (!v["name"].is_string()) {
            fail(field + ".name", "expected a string");
        }
        spec.name = v["name"].get<std::string>();
    }
    if (v.contains("params")) {
        const auto& p = v["params"];
        if (!p.is_object()) {
            fail(field + ".params", "expected an object of numbers");
        }
        for (const auto& [k, x] : p.items()) {
            spec.params[k] = number(x, field + ".params." + k);
        }
    }
    if (v.contains("form")) {
        const auto& f = v["form"];
        if (spec.name != "angle" || !f.is_string() || (f != "reward" && f != "deficit")) {
            fail(field + ".form", "only angle models take form \"reward\" or \"deficit\"");
        }
        spec.params["deficit"] = f == "deficit" ? 1.0 : 0.0;
    }
    if (v.contains("positive")) {
        spec.declared_positive = boolean(v["positive"], field + ".positive");
    }
    if (v.contains("parts")) {
        if (spec.name != "composite" || !v["parts"].is_array()) {
            fail(field + ".parts", "only a composite model takes a parts array");
        }
        for (std::size_t i = 0; i < v["parts"].size(); ++i) {
            spec.parts.push_back(parse_model(v["parts"][i], field + ".parts[" + std::to_string(i) + "]"));
        }
    }
    if (spec.name == "composite" && spec.parts.empty()) {
        fail(field + ".parts", "a composite model needs at least one part");
    }
    try {
        build_model(spec);
    } catch (const std::invalid_argument& e) {
        fail(field, e.what());
    }
    return spec;
}

ProposalConfig parse_proposals(const json& v, const std::string& field) {
    allow_keys(v, field, {"split", "merge", "flip"});
    ProposalConfig p;
    if (v.contains("split")) p.p_split = number(v["split"], field + ".split");
    if (v.contains("merge")) p.p_merge = number(v["merge"], field + ".merge");
    if (v.contains("flip")) p.p_flip = number(v["flip"], field + ".flip");
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(field, e.what());
    }
    return p;
}

OutputSpec parse_output(const json& v, const std::string& field) {
    allow_keys(v, field,
               {"dir", "trace", "final_state", "svg", "snapshots", "trace_period", "svg_period", "snapshot_period"});
    OutputSpec o;
    if (v.contains("dir")) {
        if (!v["dir"].is_string()) {
            fail(field + ".dir", "expected a path string");
        }
        o.dir = v["dir"].get<std::string>();
    }
    if (v.contains("trace")) o.trace = boolean(v["trace"], field + ".trace");
    if (v.contains("final_state")) o.final_state = boolean(v["final_state"], field + ".final_state");
    if (v.contains("svg")) o.svg = boolean(v["svg"], field + ".svg");
    if (v.contains("snapshots")) o.snapshots = boolean(v["snapshots"], field + ".snapshots");
    if (v.contains("trace_period")) o.trace_period = count(v["trace_period"], field + ".trace_period");
    if (v.contains("svg_period")) o.svg_period = count(v["svg_period"], field + ".svg_period");
    if (v.contains("snapshot_period")) o.snapshot_period = count(v["snapshot_period"], field + ".snapshot_period");
    if (o.trace_period == 0) fail(field + ".trace_period", "must be positive");
    if (o.snapshot_period == 0) fail(field + ".snapshot_period", "must be positive");
    return o;
}

VerifySpec parse_verify(const json& v, const std::string& field) {
    allow_keys(v, field,
               {"gnz_split", "gnz_flip", "states", "subsample", "split_draws", "max_z", "patterns",
                "uniformity_states", "uniformity_subsample", "min_p_value"});
    VerifySpec s;
    if (v.contains("gnz_split")) s.gnz_split = boolean(v["gnz_split"], field + ".gnz_split");
    if (v.contains("gnz_flip")) s.gnz_flip = boolean(v["gnz_flip"], field + ".gnz_flip");
    if (v.contains("states")) s.states = count(v["states"], field + ".states");
    if (v.contains("subsample")) s.subsample = count(v["subsample"], field + ".subsample");
    if (v.contains("split_draws")) {
        s.split_draws = static_cast<int>(count(v["split_draws"], field + ".split_draws"));
    }
    if (v.contains("max_z")) s.max_z = number(v["max_z"], field + ".max_z");
    if (v.contains("uniformity_states")) {
        s.uniformity_states = count(v["uniformity_states"], field + ".uniformity_states");
    }
    if (v.contains("uniformity_subsample")) {
        s.uniformity_subsample = count(v["uniformity_subsample"], field + ".uniformity_subsample");
    }
    if (v.contains("min_p_value")) s.min_p_value = number(v["min_p_value"], field + ".min_p_value");
    if (v.contains("patterns")) {
        const auto& ps = v["patterns"];
        if (!ps.is_array()) {
            fail(field + ".patterns", "expected an array of line lists");
        }
        s.patterns.clear();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const std::string pf = field + ".patterns[" + std::to_string(i) + "]";
            if (!ps[i].is_array()) {
                fail(pf, "expected an array of [theta, p] lines");
            }
            std::vector<Line> lines;
            for (std::size_t j = 0; j < ps[i].size(); ++j) {
                const Point q = point(ps[i][j], pf + "[" + std::to_string(j) + "]");
                lines.push_back(Line{q.x, q.y});
            }
            s.patterns.push_back(std::move(lines));
        }
    }
    if (s.states < 2) fail(field + ".states", "need at least 2 states");
    if (s.subsample == 0) fail(field + ".subsample", "must be positive");
    if (s.uniformity_subsample == 0) fail(field + ".uniformity_subsample", "must be positive");
    return s;
}

/// Density wrapper for models whose positivity the user does not vouch for.
class UndeclaredModel final : public EnergyModel {
public:
    explicit UndeclaredModel(ModelPtr inner) : inner_(std::move(inner)) {}
    std::string name() const override { return inner_->name(); }
    double energy(const Stats& s) const override { return inner_->energy(s); }
    double energy_delta(const StatsDelta& d) const override { return inner_->energy_delta(d); }
    bool strictly_positive() const override { return false; }
    std::optional<double> stability_constant() const override { return inner_->stability_constant(); }

private:
    ModelPtr inner_;
};

}  // namespace

Polygon parse_domain_name(const std::string& name) {
    if (name == "unit-square") {
        return unit_square();
    }
    std::istringstream in(name);
    std::string word;
    double side = 0.0;
    std::string rest;
    if (in >> word && word == "square" && in >> side && !(in >> rest)) {
        if (!(side > 0.0)) {
            throw ConfigError("square side must be positive");
        }
        return square(side);
    }
    throw ConfigError("unknown domain \"" + name + "\" (expected \"unit-square\" or \"square L\")");
}

ModelPtr build_model(const ModelSpec& spec) {
    ModelPtr m;
    if (spec.name == "composite") {
        std::vector<ModelPtr> parts;
        for (const auto& p : spec.parts) {
            parts.push_back(build_model(p));
        }
        if (!spec.params.empty()) {
            throw std::invalid_argument("composite takes parts, not params");
        }
        m = std::make_shared<CompositeModel>(std::move(parts));
    } else {
        m = make_model(spec.name, spec.params);
    }
    if (!spec.declared_positive) {
        m = std::make_shared<UndeclaredModel>(std::move(m));
    }
    return m;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        // The library message carries the line and column.
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    allow_keys(root, "",
               {"domain", "model", "proposals", "iterations", "burn_in", "subsample", "seed", "output", "verify"});
    RunConfig cfg;
    if (root.contains("domain")) cfg.domain = parse_domain(root["domain"], "domain");
    if (root.contains("model")) cfg.model = parse_model(root["model"], "model");
    if (root.contains("proposals")) cfg.proposals = parse_proposals(root["proposals"], "proposals");
    if (root.contains("iterations")) cfg.iterations = count(root["iterations"], "iterations");
    if (root.contains("burn_in")) cfg.burn_in = count(root["burn_in"], "burn_in");
    if (root.contains("subsample")) cfg.subsample = count(root["subsample"], "subsample");
    if (root.contains("seed")) cfg.seed = count(root["seed"], "seed");
    if (root.contains("output")) cfg.output = parse_output(root["output"], "output");
    if (root.contains("verify")) cfg.verify = parse_verify(root["verify"], "verify");
    if (cfg.subsample == 0) fail("subsample", "must be positive");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    try {
        return parse_config(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace ttess::cli
