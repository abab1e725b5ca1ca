#include "fpt/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace fpt {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream os;
    os << "invalid config (" << issues.size() << " problem" << (issues.size() == 1 ? "" : "s") << "):";
    for (const auto& s : issues) os << "\n  - " << s;
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Viscosity: return "viscosity";
        case RunMode::Picard: return "picard";
        case RunMode::RetractionAudit: return "retraction_audit";
        case RunMode::PropertySuite: return "property_suite";
        case RunMode::OracleCheck: return "oracle_check";
    }
    return "?";
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& origin) : origin_(origin) {}

    std::vector<std::string> issues;

    void fail(const std::string& ctx, const std::string& what) { issues.push_back(ctx + ": " + what); }

    double number(const json& j, const std::string& ctx, double fallback) {
        if (!j.is_number()) {
            fail(ctx, "expected a number");
            return fallback;
        }
        return j.get<double>();
    }

    long integer(const json& j, const std::string& ctx, long fallback) {
        if (!j.is_number_integer()) {
            fail(ctx, "expected an integer");
            return fallback;
        }
        return j.get<long>();
    }

    std::optional<Vector> vector(const json& j, const std::string& ctx, int expected_size) {
        if (!j.is_array()) {
            fail(ctx, "expected an array of numbers");
            return std::nullopt;
        }
        Vector v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                fail(ctx, "entry " + std::to_string(i) + " is not a number");
                return std::nullopt;
            }
            v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
        }
        if (expected_size >= 0 && v.size() != expected_size) {
            fail(ctx, "has " + std::to_string(v.size()) + " entries, expected " + std::to_string(expected_size));
            return std::nullopt;
        }
        return v;
    }

    std::optional<Matrix> matrix(const json& j, const std::string& ctx, int expected_cols) {
        if (!j.is_array() || j.empty()) {
            fail(ctx, "expected a nonempty array of rows");
            return std::nullopt;
        }
        const std::size_t rows = j.size();
        std::size_t cols = 0;
        Matrix m;
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].empty()) {
                fail(ctx, "row " + std::to_string(r) + " is not a nonempty array");
                return std::nullopt;
            }
            if (r == 0) {
                cols = j[r].size();
                m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            } else if (j[r].size() != cols) {
                fail(ctx, "row " + std::to_string(r) + " has a different length than row 0");
                return std::nullopt;
            }
            for (std::size_t c = 0; c < j[r].size(); ++c) {
                if (!j[r][c].is_number()) {
                    fail(ctx, "entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not a number");
                    return std::nullopt;
                }
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
            }
        }
        if (expected_cols >= 0 && m.cols() != expected_cols) {
            fail(ctx, "matrix has " + std::to_string(m.cols()) + " columns, expected " +
                          std::to_string(expected_cols));
            return std::nullopt;
        }
        return m;
    }

    std::optional<Region> region(const json& j, const std::string& ctx, int dim) {
        if (!j.is_object()) {
            fail(ctx, "expected an object");
            return std::nullopt;
        }
        const std::string kind = j.value("kind", "");
        if (!j.contains("center")) {
            fail(ctx, "missing 'center'");
            return std::nullopt;
        }
        auto center = vector(j["center"], ctx + ".center", dim);
        if (!center) return std::nullopt;
        try {
            if (kind == "ball") {
                if (!j.contains("radius")) {
                    fail(ctx, "ball region requires 'radius'");
                    return std::nullopt;
                }
                return Region::ball(*center, number(j["radius"], ctx + ".radius", 1.0));
            }
            if (kind == "box") {
                if (!j.contains("halfwidths")) {
                    fail(ctx, "box region requires 'halfwidths'");
                    return std::nullopt;
                }
                auto hw = vector(j["halfwidths"], ctx + ".halfwidths", dim);
                if (!hw) return std::nullopt;
                return Region::box(*center, *hw);
            }
        } catch (const std::invalid_argument& e) {
            fail(ctx, e.what());
            return std::nullopt;
        }
        fail(ctx, "unknown region kind '" + kind + "' (expected ball or box)");
        return std::nullopt;
    }

    std::optional<MapSpec> map(const json& j, const std::string& ctx, int dim) {
        if (!j.is_object()) {
            fail(ctx, "expected an object");
            return std::nullopt;
        }
        const std::string kind = j.value("kind", "");
        try {
            if (kind == "affine") {
                if (!j.contains("matrix")) {
                    fail(ctx, "affine map requires 'matrix'");
                    return std::nullopt;
                }
                auto m = matrix(j["matrix"], ctx + ".matrix", dim);
                auto b = j.contains("offset") ? vector(j["offset"], ctx + ".offset", dim)
                                              : std::optional<Vector>(Vector::Zero(dim));
                if (!m || !b) return std::nullopt;
                const double declared = j.contains("declared_modulus")
                                            ? number(j["declared_modulus"], ctx + ".declared_modulus", 1.0)
                                            : 1.0;
                return MapSpec::affine(*m, *b, declared);
            }
            if (kind == "contraction_toward") {
                if (!j.contains("point")) {
                    fail(ctx, "contraction_toward requires 'point'");
                    return std::nullopt;
                }
                auto p = vector(j["point"], ctx + ".point", dim);
                if (!p) return std::nullopt;
                const double beta = j.contains("beta") ? number(j["beta"], ctx + ".beta", 0.0) : 0.0;
                if (!(beta >= 0.0 && beta < 1.0)) {
                    fail(ctx, "contraction modulus must be < 1 (and nonnegative), got " + std::to_string(beta));
                    return std::nullopt;
                }
                return MapSpec::contraction_toward(*p, beta);
            }
            if (kind == "projection") {
                if (!j.contains("region")) {
                    fail(ctx, "projection requires 'region'");
                    return std::nullopt;
                }
                auto r = region(j["region"], ctx + ".region", dim);
                if (!r) return std::nullopt;
                return MapSpec::projection(*r);
            }
            if (kind == "compose" || kind == "convex_combo") {
                if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty()) {
                    fail(ctx, kind + " requires a nonempty 'maps' array");
                    return std::nullopt;
                }
                std::vector<MapSpec> children;
                for (std::size_t i = 0; i < j["maps"].size(); ++i) {
                    auto child = map(j["maps"][i], ctx + ".maps[" + std::to_string(i) + "]", dim);
                    if (!child) return std::nullopt;
                    children.push_back(std::move(*child));
                }
                std::optional<double> declared;
                if (j.contains("declared_modulus"))
                    declared = number(j["declared_modulus"], ctx + ".declared_modulus", 1.0);
                if (kind == "compose") return MapSpec::compose(std::move(children), declared);
                std::vector<double> weights;
                if (!j.contains("weights") || !j["weights"].is_array() ||
                    j["weights"].size() != children.size()) {
                    fail(ctx, "convex_combo requires 'weights' aligned with 'maps'");
                    return std::nullopt;
                }
                for (std::size_t i = 0; i < j["weights"].size(); ++i)
                    weights.push_back(number(j["weights"][i], ctx + ".weights[" + std::to_string(i) + "]", 0.0));
                return MapSpec::convex_combo(std::move(weights), std::move(children), declared);
            }
        } catch (const std::invalid_argument& e) {
            fail(ctx, e.what());
            return std::nullopt;
        }
        fail(ctx, "unknown map kind '" + kind + "'");
        return std::nullopt;
    }

private:
    std::string origin_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({origin + ": JSON parse error: " + e.what()});
    }
    if (!j.is_object()) throw ConfigError({origin + ": top level must be an object"});

    Parser p(origin);
    ExperimentConfig cfg;

    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != 1)
        p.fail("schema_version", "missing or unsupported (this build reads version 1)");

    cfg.name = j.value("name", "unnamed");

    const std::string mode = j.value("mode", "");
    if (mode == "viscosity") cfg.mode = RunMode::Viscosity;
    else if (mode == "picard") cfg.mode = RunMode::Picard;
    else if (mode == "retraction_audit") cfg.mode = RunMode::RetractionAudit;
    else if (mode == "property_suite") cfg.mode = RunMode::PropertySuite;
    else if (mode == "oracle_check") cfg.mode = RunMode::OracleCheck;
    else p.fail("mode", "expected one of viscosity|picard|retraction_audit|property_suite|oracle_check");

    int dim = 0;
    if (!j.contains("dimension")) p.fail("dimension", "required");
    else dim = static_cast<int>(p.integer(j["dimension"], "dimension", 0));
    if (dim < 1) p.fail("dimension", "must be a positive integer");
    cfg.dimension = dim;

    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(p.integer(j["seed"], "seed", 1));

    // seminorm family
    std::vector<Seminorm> members;
    if (!j.contains("seminorms") || !j["seminorms"].is_array() || j["seminorms"].empty()) {
        p.fail("seminorms", "required nonempty array");
    } else {
        for (std::size_t i = 0; i < j["seminorms"].size(); ++i) {
            const auto& sj = j["seminorms"][i];
            const std::string label =
                sj.is_object() ? sj.value("label", "q" + std::to_string(i)) : "q" + std::to_string(i);
            const std::string ctx = "seminorms[" + std::to_string(i) + "] ('" + label + "')";
            if (!sj.is_object() || !sj.contains("rows")) {
                p.fail(ctx, "expected an object with 'rows'");
                continue;
            }
            auto m = p.matrix(sj["rows"], ctx, dim);
            if (!m) continue;
            try {
                members.emplace_back(*m, label);
            } catch (const std::invalid_argument& e) {
                p.fail(ctx, e.what());
            }
        }
    }

    std::optional<Region> reg;
    if (!j.contains("region")) p.fail("region", "required");
    else reg = p.region(j["region"], "region", dim);

    if (j.contains("map_T")) cfg.map_T = p.map(j["map_T"], "map_T", dim);
    if (j.contains("map_f")) cfg.map_f = p.map(j["map_f"], "map_f", dim);

    if (j.contains("schedule")) {
        const auto& sj = j["schedule"];
        const std::string kind = sj.is_object() ? sj.value("kind", "") : "";
        try {
            if (kind == "harmonic") {
                cfg.schedule = Schedule::harmonic(p.integer(sj.value("length", json(0)), "schedule.length", 0));
            } else if (kind == "power") {
                cfg.schedule = Schedule::power(p.number(sj.value("p", json(0.0)), "schedule.p", 0.0),
                                               p.integer(sj.value("length", json(0)), "schedule.length", 0));
            } else if (kind == "explicit") {
                auto vals = p.vector(sj.value("values", json::array()), "schedule.values", -1);
                if (vals) {
                    std::vector<double> v(vals->data(), vals->data() + vals->size());
                    cfg.schedule = Schedule::explicit_values(std::move(v));
                }
            } else {
                p.fail("schedule.kind", "expected harmonic|power|explicit");
            }
        } catch (const std::invalid_argument& e) {
            p.fail("schedule", e.what());
        }
    }

    if (j.contains("x0")) cfg.x0 = p.vector(j["x0"], "x0", dim);
    if (j.contains("anchor")) cfg.anchor = p.vector(j["anchor"], "anchor", dim);

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("tol_inner")) cfg.tol.tol_inner = p.number(t["tol_inner"], "tolerances.tol_inner", 1e-10);
        if (t.contains("residual_tol"))
            cfg.tol.residual_tol = p.number(t["residual_tol"], "tolerances.residual_tol", 1e-8);
        if (t.contains("vi_tol")) cfg.tol.vi_tol = p.number(t["vi_tol"], "tolerances.vi_tol", 1e-6);
        if (t.contains("membership")) cfg.tol.membership = p.number(t["membership"], "tolerances.membership", 1e-10);
        if (!(cfg.tol.tol_inner > 0.0)) p.fail("tolerances.tol_inner", "must be positive");
        if (!(cfg.tol.residual_tol >= 0.0)) p.fail("tolerances.residual_tol", "must be nonnegative");
    }
    if (j.contains("stopping")) {
        const auto& s = j["stopping"];
        if (s.contains("stall_tol")) cfg.stopping.stall_tol = p.number(s["stall_tol"], "stopping.stall_tol", 1e-12);
        if (s.contains("stall_steps"))
            cfg.stopping.stall_steps = static_cast<int>(p.integer(s["stall_steps"], "stopping.stall_steps", 5));
    }
    cfg.stopping.residual_tol = cfg.tol.residual_tol;

    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        if (s.contains("modulus_pairs"))
            cfg.sampling.modulus_pairs = static_cast<int>(p.integer(s["modulus_pairs"], "sampling.modulus_pairs", 10000));
        if (s.contains("invariance_samples"))
            cfg.sampling.invariance_samples =
                static_cast<int>(p.integer(s["invariance_samples"], "sampling.invariance_samples", 1000));
        if (s.contains("fixed_set_samples"))
            cfg.sampling.fixed_set_samples =
                static_cast<int>(p.integer(s["fixed_set_samples"], "sampling.fixed_set_samples", 100));
        if (s.contains("property_samples"))
            cfg.sampling.property_samples = p.integer(s["property_samples"], "sampling.property_samples", 10000);
    }

    if (j.contains("picard_k")) cfg.picard_k = p.number(j["picard_k"], "picard_k", 0.0);
    if (j.contains("mann_lambda")) cfg.mann_lambda = p.number(j["mann_lambda"], "mann_lambda", 0.5);
    if (j.contains("max_inner")) cfg.max_inner = p.integer(j["max_inner"], "max_inner", 200000);
    if (j.contains("execution")) {
        const std::string e = j["execution"].get<std::string>();
        if (e == "serial") cfg.policy = ExecPolicy::Serial;
        else if (e == "parallel") cfg.policy = ExecPolicy::Parallel;
        else p.fail("execution", "expected serial|parallel");
    }

    // mode-specific requirements
    const bool needs_T = cfg.mode != RunMode::PropertySuite;
    const bool needs_f = cfg.mode == RunMode::Viscosity || cfg.mode == RunMode::OracleCheck;
    if (needs_T && !cfg.map_T) p.fail("map_T", "required for mode " + to_string(cfg.mode));
    if (needs_f && !cfg.map_f) p.fail("map_f", "required for mode " + to_string(cfg.mode));
    if (needs_f && cfg.map_f) {
        cfg.beta = cfg.map_f->declared_modulus();
        if (!(cfg.beta >= 0.0 && cfg.beta < 1.0))
            p.fail("map_f", "contraction modulus must be < 1, declared " + std::to_string(cfg.beta));
    }
    if ((cfg.mode == RunMode::Viscosity || cfg.mode == RunMode::OracleCheck) && !cfg.schedule)
        p.fail("schedule", "required for mode " + to_string(cfg.mode));
    if (cfg.mode == RunMode::Picard) {
        if (!j.contains("picard_k") && cfg.map_T) cfg.picard_k = cfg.map_T->declared_modulus();
        if (!(cfg.picard_k > 0.0 && cfg.picard_k < 1.0))
            p.fail("picard_k", "contraction modulus must be < 1 (and positive), got " +
                                   std::to_string(cfg.picard_k));
    }
    if (cfg.mode == RunMode::RetractionAudit && !cfg.anchor)
        p.fail("anchor", "required for mode retraction_audit");
    if (cfg.mode == RunMode::OracleCheck) {
        if (cfg.map_T && !as_affine(*cfg.map_T)) p.fail("map_T", "oracle_check requires an affine-representable map");
        if (cfg.map_f && !as_affine(*cfg.map_f)) p.fail("map_f", "oracle_check requires an affine-representable map");
    }

    if (!p.issues.empty()) throw ConfigError(std::move(p.issues));

    cfg.family = SeminormFamily(std::move(members));
    cfg.region = *reg;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open file"});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

}  // namespace fpt
