#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttess/line_pattern.hpp"
#include "ttess/models.hpp"
#include "ttess/sampler.hpp"

namespace ttess::cli {

/// Invalid configuration. The message names the offending field, or the line and
/// column for syntax errors.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    std::string name = "crtt";
    std::map<std::string, double> params;
    std::vector<ModelSpec> parts;  // composite only
    bool declared_positive = true;
};

struct OutputSpec {
    std::filesystem::path dir = "out";
    bool trace = true;
    bool final_state = true;
    bool svg = true;
    bool snapshots = true;
    std::uint64_t trace_period = 100;
    std::uint64_t svg_period = 0;  // 0: final state only
    std::uint64_t snapshot_period = 100;
};

struct VerifySpec {
    bool gnz_split = true;
    bool gnz_flip = true;
    std::uint64_t states = 10000;
    std::uint64_t subsample = 100;
    int split_draws = 10;
    double max_z = 3.0;
    // Uniformity checks; the default is two lines crossing inside the unit square.
    std::vector<std::vector<Line>> patterns{{Line{0.0, 0.45}, Line{kPi / 2.0, -0.55}}};
    std::uint64_t uniformity_states = 100000;
    std::uint64_t uniformity_subsample = 10;
    double min_p_value = 0.01;
};

struct RunConfig {
    Polygon domain = unit_square();
    ModelSpec model;
    ProposalConfig proposals;
    std::uint64_t iterations = 100000;
    std::uint64_t burn_in = 0;
    std::uint64_t subsample = 100;
    std::uint64_t seed = 1;
    OutputSpec output;
    VerifySpec verify;
};

/// Parses the JSON configuration. Every key is optional; unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Parses "unit-square" or "square L".
Polygon parse_domain_name(const std::string& name);

ModelPtr build_model(const ModelSpec& spec);

}  // namespace ttess::cli
