#pragma once

#include "fpt/maps.hpp"
#include "fpt/space.hpp"
#include "fpt/viscosity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fpt {

/// Carries every validation problem found in a config, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

enum class RunMode { Viscosity, Picard, RetractionAudit, PropertySuite, OracleCheck };

std::string to_string(RunMode mode);

struct Tolerances {
    double tol_inner = 1e-10;
    double residual_tol = 1e-8;
    double vi_tol = 1e-6;
    double membership = 1e-10;
};

struct SamplingConfig {
    int modulus_pairs = 10000;
    int invariance_samples = 1000;
    int fixed_set_samples = 100;
    long property_samples = 10000;
};

/// One experiment instance, fully validated at load time.
struct ExperimentConfig {
    std::string name;
    RunMode mode = RunMode::Viscosity;
    int dimension = 0;
    std::uint64_t seed = 1;
    SeminormFamily family{std::vector<Seminorm>{}};  // replaced during load
    Region region = Region::ball(Vector::Zero(1), 1.0);
    std::optional<MapSpec> map_T;
    std::optional<MapSpec> map_f;
    double beta = 0.0;               ///< contraction modulus claimed for f
    double picard_k = 0.0;           ///< contraction modulus claimed for T (picard mode)
    std::optional<Schedule> schedule;
    std::optional<Vector> x0;        ///< picard start; defaults to region center
    std::optional<Vector> anchor;    ///< retraction-audit anchor
    Tolerances tol;
    StoppingRule stopping;
    SamplingConfig sampling;
    double mann_lambda = 0.5;
    long max_inner = 200000;
    ExecPolicy policy = ExecPolicy::Parallel;
};

/// Parses and validates the JSON config documented in the README.
/// Throws ConfigError listing every problem found.
ExperimentConfig load_config(const std::string& path);

/// Same, from an in-memory JSON string (used by tests).
ExperimentConfig parse_config(const std::string& json_text, const std::string& origin = "<memory>");

}  // namespace fpt
