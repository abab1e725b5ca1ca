#include "fpt/runner.hpp"

#include "fpt/batteries.hpp"
#include "fpt/csv.hpp"
#include "fpt/retraction.hpp"
#include "fpt/sampling.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

using nlohmann::json;

namespace fpt {

namespace {

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const HypothesisAudit& audit) {
    json items = json::array();
    for (const auto& item : audit.items)
        items.push_back({{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}});
    return {{"all_pass", audit.all_pass}, {"items", items}};
}

json to_json(const BatteryResult& r) {
    return {{"name", r.name},           {"samples", r.samples}, {"skipped", r.skipped},
            {"max_violation", r.max_violation}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

json to_json(const ModulusReport& r) {
    json per = json::array();
    for (const auto& m : r.per_seminorm) {
        json e = {{"label", m.label},
                  {"estimate", m.estimate},
                  {"pairs_used", m.pairs_used},
                  {"inconclusive", m.inconclusive},
                  {"violated", m.violated}};
        if (m.exact) e["exact"] = std::isinf(*m.exact) ? json("inf") : json(*m.exact);
        per.push_back(e);
    }
    return {{"declared", r.declared}, {"violation", r.violation}, {"per_seminorm", per}};
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
}

void write_trajectory_csv(const ImplicitTrajectory& traj, const SeminormFamily& family,
                          const std::filesystem::path& path, const std::string& name) {
    CsvWriter csv(path.string());
    csv.comment("fpt trajectory name=" + name + " generated=" + timestamp());
    std::vector<std::string> cols{"n", "eps", "inner_iters", "beta_n"};
    for (const auto& q : family.members()) cols.push_back("res_" + q.label());
    const Eigen::Index d = traj.limit_estimate.size();
    for (Eigen::Index i = 0; i < d; ++i) cols.push_back("z" + std::to_string(i));
    csv.header(cols);
    for (const auto& step : traj.steps) {
        std::vector<std::string> cells{std::to_string(step.index), g17(step.eps),
                                       std::to_string(step.inner_iterations), g17(step.inner_modulus)};
        for (double r : step.residuals) cells.push_back(g17(r));
        for (Eigen::Index i = 0; i < d; ++i) cells.push_back(g17(step.z(i)));
        csv.row(cells);
    }
}

json trajectory_summary(const ImplicitTrajectory& traj) {
    return {{"steps", traj.steps.size()},
            {"converged", traj.converged},
            {"step_failed", traj.step_failed},
            {"stop_reason", traj.stop_reason},
            {"limit_estimate", to_json(traj.limit_estimate)},
            {"limit_refined", to_json(traj.limit_refined)},
            {"last_residuals", traj.steps.empty() ? json::array() : json(traj.steps.back().residuals)}};
}

int finish(RunOutcome& outcome, bool completed, bool flagged) {
    outcome.converged = completed;
    outcome.flagged = flagged;
    outcome.exit_code = !completed ? 1 : (flagged ? 2 : 0);
    return outcome.exit_code;
}

RunOutcome run_viscosity(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    RunOutcome outcome;
    AuditOptions audit_opt;
    audit_opt.modulus_pairs = cfg.sampling.modulus_pairs;
    audit_opt.invariance_samples = cfg.sampling.invariance_samples;
    audit_opt.seed = cfg.seed;
    audit_opt.policy = cfg.policy;
    const HypothesisAudit audit =
        check_hypotheses(*cfg.map_T, *cfg.map_f, cfg.beta, cfg.family, cfg.region, audit_opt);
    write_json(to_json(audit), out / "audit.json");
    if (!audit.all_pass) outcome.notes.push_back("hypothesis audit flagged; running in exploratory mode");

    const ImplicitTrajectory traj =
        run_implicit_scheme(*cfg.map_T, *cfg.map_f, cfg.beta, *cfg.schedule, cfg.family, cfg.region,
                            cfg.tol.tol_inner, cfg.stopping, cfg.max_inner);
    write_trajectory_csv(traj, cfg.family, out / "trajectory.csv", cfg.name);

    // A-posteriori anchor: the theorem's x solves x = f(Px), and P x equals
    // the scheme's limit, so x = f(limit).
    const Vector limit = traj.limit_refined;
    const Vector x_anchor = (*cfg.map_f)(limit);

    std::vector<double> min_slack(cfg.family.size(), std::numeric_limits<double>::infinity());
    for (const auto& step : traj.steps) {
        const auto slack = step4_slack(step.z, limit, x_anchor, cfg.beta, cfg.family);
        for (std::size_t i = 0; i < slack.size(); ++i) min_slack[i] = std::min(min_slack[i], slack[i]);
    }

    const FixedSet fs = fixed_set_oracle(*cfg.map_T);
    const auto fix_samples =
        sample_fixed_set(fs, cfg.region, cfg.sampling.fixed_set_samples, derive_seed(cfg.seed, 71, 0));
    const ViReport vi = check_variational_inequality(limit, x_anchor, fix_samples, cfg.family,
                                                     cfg.tol.vi_tol, cfg.policy);

    json summary = {{"name", cfg.name},
                    {"mode", "viscosity"},
                    {"seed", cfg.seed},
                    {"beta", cfg.beta},
                    {"trajectory", trajectory_summary(traj)},
                    {"hypothesis_audit", to_json(audit)},
                    {"anchor_fixed_point", to_json(x_anchor)},
                    {"step4_min_slack", min_slack},
                    {"variational_inequality",
                     {{"max_pairing", vi.max_pairing},
                      {"samples", vi.samples},
                      {"conclusive", vi.conclusive},
                      {"pass", vi.pass}}}};

    const bool completed = !traj.step_failed && traj.converged;
    finish(outcome, completed, !audit.all_pass);
    summary["exit_code"] = outcome.exit_code;
    write_json(summary, out / "summary.json");
    return outcome;
}

RunOutcome run_picard(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    RunOutcome outcome;
    const ModulusReport mod = verify_modulus(*cfg.map_T, cfg.family, cfg.region,
                                             cfg.sampling.modulus_pairs, derive_seed(cfg.seed, 72, 0),
                                             cfg.policy);
    bool flagged = false;
    for (const auto& m : mod.per_seminorm)
        flagged = flagged || m.estimate > cfg.picard_k + 1e-9 ||
                  (m.exact && *m.exact > cfg.picard_k + 1e-9);
    if (flagged) outcome.notes.push_back("declared contraction modulus violated on samples");

    const Vector x0 = cfg.x0 ? *cfg.x0 : cfg.region.center();
    PicardOptions opt;
    opt.tol = cfg.tol.tol_inner;
    opt.max_iter = cfg.max_inner;
    opt.record_history = true;
    const PicardReport report = solve_contraction(*cfg.map_T, cfg.picard_k, x0, cfg.family, opt);

    CsvWriter csv((out / "picard.csv").string());
    csv.comment("fpt picard name=" + cfg.name + " generated=" + timestamp());
    std::vector<std::string> cols{"n"};
    for (const auto& q : cfg.family.members()) cols.push_back("gap_" + q.label());
    for (const auto& q : cfg.family.members()) cols.push_back("bound_" + q.label());
    csv.header(cols);
    const std::size_t rows = report.gap_history.empty() ? 0 : report.gap_history.front().size();
    for (std::size_t n = 0; n < rows; ++n) {
        std::vector<std::string> cells{std::to_string(n)};
        for (std::size_t qi = 0; qi < cfg.family.size(); ++qi) cells.push_back(g17(report.gap_history[qi][n]));
        for (std::size_t qi = 0; qi < cfg.family.size(); ++qi)
            cells.push_back(g17(report.bound_history[qi][n]));
        csv.row(cells);
    }

    const DescentReport descent =
        check_descent_sequence(report.iterates, *cfg.map_T, cfg.picard_k, cfg.family, report.limit);

    json summary = {{"name", cfg.name},
                    {"mode", "picard"},
                    {"k", cfg.picard_k},
                    {"iterations", report.iterations},
                    {"converged", report.converged},
                    {"final_bound", report.final_bound},
                    {"limit", to_json(report.limit)},
                    {"modulus_audit", to_json(mod)},
                    {"descent_lemma",
                     {{"max_premise_violation", descent.max_premise_violation},
                      {"max_conclusion_violation", descent.max_conclusion_violation},
                      {"premise_ok", descent.premise_ok},
                      {"conclusion_ok", descent.conclusion_ok}}}};
    finish(outcome, report.converged, flagged);
    summary["exit_code"] = outcome.exit_code;
    write_json(summary, out / "summary.json");
    return outcome;
}

RunOutcome run_retraction_audit(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    RunOutcome outcome;
    const long length = cfg.schedule ? cfg.schedule->length() : 1000;
    const ModulusReport mod = verify_modulus(*cfg.map_T, cfg.family, cfg.region,
                                             cfg.sampling.modulus_pairs, derive_seed(cfg.seed, 73, 0),
                                             cfg.policy);
    bool flagged = mod.violation;

    const RetractionEstimate est = estimate_retraction(*cfg.map_T, *cfg.anchor, cfg.family, cfg.region,
                                                       length, cfg.tol.tol_inner, cfg.max_inner);
    write_trajectory_csv(est.trajectory, cfg.family, out / "trajectory.csv", cfg.name);

    const FixedSet fs = fixed_set_oracle(*cfg.map_T);
    const auto fix_samples =
        sample_fixed_set(fs, cfg.region, cfg.sampling.fixed_set_samples, derive_seed(cfg.seed, 74, 0));
    const ViReport vi =
        check_variational_inequality(est.image, est.anchor, fix_samples, cfg.family, cfg.tol.vi_tol,
                                     cfg.policy);
    const SunnyReport sunny = check_sunny(*cfg.map_T, est.anchor, est.image, {0.0, 0.5, 1.0, 2.0},
                                          cfg.family, cfg.region, length, cfg.tol.tol_inner);
    const UniquenessReport unique =
        check_uniqueness(*cfg.map_T, est.anchor, cfg.family, cfg.region, length, cfg.tol.tol_inner);

    const bool inconclusive = !vi.conclusive || !sunny.conclusive || !unique.conclusive;
    flagged = flagged || !vi.pass || !sunny.pass || !unique.pass || inconclusive;
    if (inconclusive) outcome.notes.push_back("an audit was inconclusive (empty fixed-set sample?)");

    json sunny_entries = json::array();
    for (const auto& e : sunny.entries) {
        json entry = {{"t", e.t}, {"admissible", e.admissible}};
        if (e.admissible) {
            entry["image"] = to_json(e.image);
            entry["deviation"] = e.deviation;
        }
        sunny_entries.push_back(entry);
    }

    json summary = {{"name", cfg.name},
                    {"mode", "retraction_audit"},
                    {"anchor", to_json(est.anchor)},
                    {"image", to_json(est.image)},
                    {"image_last_iterate", to_json(est.image_last)},
                    {"reliable", est.reliable},
                    {"modulus_audit", to_json(mod)},
                    {"variational_inequality",
                     {{"max_pairing", vi.max_pairing},
                      {"per_seminorm_max", vi.per_seminorm_max},
                      {"samples", vi.samples},
                      {"conclusive", vi.conclusive},
                      {"pass", vi.pass}}},
                    {"sunny", {{"entries", sunny_entries}, {"conclusive", sunny.conclusive}, {"pass", sunny.pass}}},
                    {"uniqueness",
                     {{"difference", unique.difference},
                      {"conclusive", unique.conclusive},
                      {"pass", unique.pass},
                      {"alternate", to_json(unique.alternate)}}}};
    finish(outcome, est.reliable, flagged);
    summary["exit_code"] = outcome.exit_code;
    write_json(summary, out / "summary.json");
    return outcome;
}

RunOutcome run_property_suite(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    RunOutcome outcome;
    const long n = cfg.sampling.property_samples;
    std::vector<BatteryResult> results;
    results.push_back(seminorm_axiom_battery(cfg.family, cfg.region, n, derive_seed(cfg.seed, 81, 0),
                                             cfg.policy));
    const DualityBatteryResult duality = duality_identity_battery(cfg.family, cfg.region, n,
                                                                  derive_seed(cfg.seed, 82, 0), cfg.policy);
    results.push_back(duality.pairing_identity);
    results.push_back(duality.dual_norm_identity);
    results.push_back(subgradient_battery(cfg.family, cfg.region, n, derive_seed(cfg.seed, 83, 0),
                                          cfg.policy));
    results.push_back(directional_lemma_battery(cfg.family, cfg.region, n, derive_seed(cfg.seed, 84, 0),
                                                cfg.policy));

    json batteries_json = json::array();
    long passed = 0;
    for (const auto& r : results) {
        batteries_json.push_back(to_json(r));
        if (r.pass) ++passed;
    }

    json maps_json = json::object();
    bool modulus_flag = false;
    const auto audit_map = [&](const char* key, const MapSpec& map, double bound) {
        const ModulusReport mod = verify_modulus(map, cfg.family, cfg.region, cfg.sampling.modulus_pairs,
                                                 derive_seed(cfg.seed, 85, 0), cfg.policy);
        maps_json[key] = to_json(mod);
        for (const auto& m : mod.per_seminorm)
            modulus_flag = modulus_flag || m.estimate > bound + 1e-9 || (m.exact && *m.exact > bound + 1e-9);
    };
    if (cfg.map_T) audit_map("map_T", *cfg.map_T, cfg.map_T->declared_modulus());
    if (cfg.map_f) audit_map("map_f", *cfg.map_f, cfg.map_f->declared_modulus());

    const bool all_pass = passed == static_cast<long>(results.size()) && !modulus_flag;
    json summary = {{"name", cfg.name},
                    {"mode", "property_suite"},
                    {"samples", n},
                    {"batteries", batteries_json},
                    {"pass_count", passed},
                    {"battery_count", results.size()},
                    {"map_audits", maps_json},
                    {"all_pass", all_pass}};
    finish(outcome, true, !all_pass);
    summary["exit_code"] = outcome.exit_code;
    write_json(summary, out / "summary.json");
    return outcome;
}

RunOutcome run_oracle_check(const ExperimentConfig& cfg, const std::filesystem::path& out) {
    RunOutcome outcome;
    const ImplicitTrajectory traj =
        run_implicit_scheme(*cfg.map_T, *cfg.map_f, cfg.beta, *cfg.schedule, cfg.family, cfg.region,
                            cfg.tol.tol_inner, cfg.stopping, cfg.max_inner);
    write_trajectory_csv(traj, cfg.family, out / "trajectory.csv", cfg.name);

    CsvWriter csv((out / "oracle.csv").string());
    csv.comment("fpt oracle-check name=" + cfg.name + " generated=" + timestamp());
    csv.header({"n", "eps", "deviation"});
    double max_dev = 0.0;
    bool singular = false;
    for (const auto& step : traj.steps) {
        const auto oracle = oracle_implicit_step_affine(*cfg.map_T, *cfg.map_f, step.eps);
        if (!oracle) {
            singular = true;
            csv.row({std::to_string(step.index), g17(step.eps), "singular"});
            continue;
        }
        const double dev = cfg.family.sup(step.z - *oracle);
        max_dev = std::max(max_dev, dev);
        csv.row({std::to_string(step.index), g17(step.eps), g17(dev)});
    }
    const bool pass = !singular && !traj.step_failed && max_dev <= 10.0 * cfg.tol.tol_inner;

    json summary = {{"name", cfg.name},
                    {"mode", "oracle_check"},
                    {"max_deviation", max_dev},
                    {"deviation_bound", 10.0 * cfg.tol.tol_inner},
                    {"singular_system", singular},
                    {"trajectory", trajectory_summary(traj)},
                    {"pass", pass}};
    finish(outcome, pass, false);
    summary["exit_code"] = outcome.exit_code;
    write_json(summary, out / "summary.json");
    return outcome;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    try {
        switch (cfg.mode) {
            case RunMode::Viscosity: return run_viscosity(cfg, out);
            case RunMode::Picard: return run_picard(cfg, out);
            case RunMode::RetractionAudit: return run_retraction_audit(cfg, out);
            case RunMode::PropertySuite: return run_property_suite(cfg, out);
            case RunMode::OracleCheck: return run_oracle_check(cfg, out);
        }
    } catch (const std::exception& e) {
        RunOutcome outcome;
        outcome.exit_code = 1;
        outcome.notes.push_back(std::string("run failed: ") + e.what());
        return outcome;
    }
    return RunOutcome{};
}

RunOutcome compare_schemes(const ExperimentConfig& cfg, const std::string& out_dir) {
    RunOutcome outcome;
    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    if (!cfg.map_T || !cfg.map_f || !cfg.schedule) {
        outcome.notes.push_back("compare requires map_T, map_f and a schedule");
        return outcome;
    }
    try {
        const ImplicitTrajectory traj =
            run_implicit_scheme(*cfg.map_T, *cfg.map_f, cfg.beta, *cfg.schedule, cfg.family, cfg.region,
                                cfg.tol.tol_inner, cfg.stopping, cfg.max_inner);

        const long length = cfg.schedule->length();
        std::vector<std::vector<double>> mann_res;
        Vector x = cfg.region.center();
        for (long n = 1; n <= length; ++n) {
            x = (1.0 - cfg.mann_lambda) * x + cfg.mann_lambda * (*cfg.map_T)(x);
            mann_res.push_back(cfg.family.values((*cfg.map_T)(x) - x));
        }

        CsvWriter csv((out / "compare.csv").string());
        csv.comment("fpt compare name=" + cfg.name + " generated=" + timestamp());
        std::vector<std::string> cols{"n", "eps"};
        for (const auto& q : cfg.family.members()) cols.push_back("implicit_res_" + q.label());
        for (const auto& q : cfg.family.members()) cols.push_back("mann_res_" + q.label());
        csv.header(cols);
        for (long n = 1; n <= length; ++n) {
            std::vector<std::string> cells{std::to_string(n)};
            const std::size_t idx = static_cast<std::size_t>(n - 1);
            if (idx < traj.steps.size()) {
                cells.push_back(g17(traj.steps[idx].eps));
                for (double r : traj.steps[idx].residuals) cells.push_back(g17(r));
            } else {
                cells.push_back("");
                for (std::size_t qi = 0; qi < cfg.family.size(); ++qi) cells.push_back("");
            }
            for (double r : mann_res[idx]) cells.push_back(g17(r));
            csv.row(cells);
        }
        outcome.exit_code = 0;
        outcome.converged = true;
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.notes.push_back(std::string("compare failed: ") + e.what());
    }
    return outcome;
}

}  // namespace fpt
