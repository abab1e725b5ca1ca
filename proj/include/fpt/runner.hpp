#pragma once

#include "fpt/config.hpp"

#include <string>
#include <vector>

namespace fpt {

/// Result of executing one experiment config.
///   exit_code 0: run completed, converged where applicable, audits clean
///   exit_code 2: run completed but a hypothesis or property audit flagged
///   exit_code 1: failure (non-convergence, inner certificate missed, I/O)
struct RunOutcome {
    int exit_code = 1;
    bool converged = false;
    bool flagged = false;
    std::vector<std::string> notes;
};

/// Executes the config and writes its artifacts (trajectory.csv / picard.csv /
/// oracle.csv, audit.json, summary.json depending on mode) into out_dir.
/// Deterministic for a fixed config and seed.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Contrast the implicit scheme with explicit Krasnoselskii-Mann iteration
/// x_{n+1} = (1 - lambda) x_n + lambda T x_n on the same instance; writes
/// compare.csv.  No convergence claim attaches to the explicit scheme.
RunOutcome compare_schemes(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace fpt
