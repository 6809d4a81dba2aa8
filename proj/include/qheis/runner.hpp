#pragma once

// Config-driven runs and report emission.
//
// A config is a JSON object
//   {"task": "verify" | "spectrum" | "classify" | "equiv" | "schrodinger",
//    "family": AtomFamily, "window": Window, "bmap": BoundaryMap,
//    "tol": 1e-10, "seed": 1, "samples": 100,
//    "other": "path/to/second.json",            (equiv)
//    "schrodinger": {"q": 0.5, "samples": 50}}   (schrodinger)
// Tolerance precedence: the config's "tol", then $QHEIS_TOL, then default_tol.

#include "qheis/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace qheis {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr double default_tol = 1e-10;

enum class Task { verify, spectrum, classify, equiv, schrodinger };

inline const char* task_name(Task t) {
    switch (t) {
        case Task::verify: return "verify";
        case Task::spectrum: return "spectrum";
        case Task::classify: return "classify";
        case Task::equiv: return "equiv";
        case Task::schrodinger: return "schrodinger";
    }
    return "?";
}

inline std::optional<Task> task_from(const std::string& s) {
    for (Task t : {Task::verify, Task::spectrum, Task::classify, Task::equiv, Task::schrodinger})
        if (s == task_name(t)) return t;
    return std::nullopt;
}

/// Unreadable or unparsable input files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Task task = Task::verify;
    std::optional<ExtensionTriple> triple;  // all tasks except schrodinger
    double tol = default_tol;
    std::uint64_t seed = 1;
    int samples = 100;
    double schrodinger_q = 0.5;
    std::shared_ptr<const RunConfig> other;  // equiv
    json effective;                          // resolved config; hashed for reports

    const ExtensionTriple& model() const {
        if (!triple) throw std::logic_error("config has no model");
        return *triple;
    }
};

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(cfg.effective.dump()); }

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

namespace detail {

inline double env_tol() {
    const char* s = std::getenv("QHEIS_TOL");
    if (!s || !*s) return default_tol;
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
        throw ConfigError("$QHEIS_TOL", std::string("not a positive number: ") + s);
    return v;
}

}  // namespace detail

inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = ".", std::optional<Task> forced = {});

inline RunConfig load_config(const std::filesystem::path& path, std::optional<Task> forced = {}) {
    return parse_config(read_json_file(path), path.parent_path(), forced);
}

/// Validates j and resolves defaults.  A forced task (from a subcommand) wins over "task".
inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir, std::optional<Task> forced) {
    using namespace jsonio;
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    RunConfig cfg;
    if (forced) {
        cfg.task = *forced;
    } else {
        const json& t = require(j, "task", "");
        if (!t.is_string()) throw ConfigError("/task", "expected a string");
        auto task = task_from(t.get<std::string>());
        if (!task) throw ConfigError("/task", "unknown task \"" + t.get<std::string>() + "\"");
        cfg.task = *task;
    }

    if (j.contains("tol")) {
        cfg.tol = number(j["tol"], "/tol");
        if (!(cfg.tol > 0.0)) throw ConfigError("/tol", "tolerance must be positive");
    } else {
        cfg.tol = detail::env_tol();
    }
    if (j.contains("seed")) {
        const auto s = integer(j["seed"], "/seed");
        if (s < 0) throw ConfigError("/seed", "seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("samples")) {
        const auto s = integer(j["samples"], "/samples");
        if (s < 1 || s > 1000000) throw ConfigError("/samples", "samples must lie in [1, 1000000]");
        cfg.samples = static_cast<int>(s);
    }

    json eff{{"task", task_name(cfg.task)}, {"tol", cfg.tol}, {"seed", cfg.seed}};
    if (cfg.task == Task::schrodinger) {
        const json& s = require(j, "schrodinger", "");
        cfg.schrodinger_q = number(require(s, "q", "/schrodinger"), "/schrodinger/q");
        if (!(cfg.schrodinger_q > 0.0 && cfg.schrodinger_q < 1.0))
            throw ConfigError("/schrodinger/q", "q must lie in (0, 1)");
        cfg.samples = 50;
        if (s.contains("samples")) {
            const auto n = integer(s["samples"], "/schrodinger/samples");
            if (n < 1 || n > 1000000) throw ConfigError("/schrodinger/samples", "samples must lie in [1, 1000000]");
            cfg.samples = static_cast<int>(n);
        }
        eff["schrodinger"] = {{"q", cfg.schrodinger_q}, {"samples", cfg.samples}};
        cfg.effective = std::move(eff);
        return cfg;
    }

    AtomFamily fam = family_from(require(j, "family", ""), "/family");
    Window win = window_from(require(j, "window", ""), "/window");
    BoundaryMap bmap = bmap_from(require(j, "bmap", ""), "/bmap");
    if (bmap.Vp().rows() != static_cast<Eigen::Index>(fam.plus().size()) ||
        bmap.Vp().cols() != static_cast<Eigen::Index>(fam.minus().size()))
        throw ConfigError("/bmap", "V', W' must be (#plus atoms) x (#minus atoms)");
    cfg.triple = ExtensionTriple{std::move(fam), win, std::move(bmap)};
    eff["family"] = to_json(cfg.triple->family);
    eff["window"] = to_json(win);
    eff["bmap"] = to_json(cfg.triple->bmap);
    eff["samples"] = cfg.samples;

    if (cfg.task == Task::verify) {
        if (!(win.n_min <= -2 && win.n_max >= 3)) throw ConfigError("/window", "verify needs a window containing [-2, 3]");
    } else if (cfg.task == Task::spectrum) {
        if (!(win.n_min <= -1 && win.n_max >= 1)) throw ConfigError("/window", "spectrum needs a window containing [-1, 1]");
    } else if (cfg.task == Task::equiv) {
        const json& o = require(j, "other", "");
        if (!o.is_string()) throw ConfigError("/other", "expected a file path");
        const std::filesystem::path p = base_dir / o.get<std::string>();
        json other_json;
        try {
            other_json = read_json_file(p);
        } catch (const IoError& e) {
            throw ConfigError("/other", e.what());
        }
        try {
            cfg.other = std::make_shared<RunConfig>(parse_config(other_json, p.parent_path(), Task::classify));
        } catch (const ConfigError& e) {
            throw ConfigError("/other", std::string("in ") + p.string() + ": " + e.what());
        }
        eff["other"] = cfg.other->effective;
    }
    cfg.effective = std::move(eff);
    return cfg;
}

/// Builds a config for an equivalence run from two model configs.
inline RunConfig equiv_config(const RunConfig& a, const RunConfig& b) {
    RunConfig cfg = a;
    cfg.task = Task::equiv;
    cfg.other = std::make_shared<RunConfig>(b);
    cfg.effective["task"] = task_name(Task::equiv);
    json other = b.effective;
    other["task"] = task_name(Task::classify);
    cfg.effective["other"] = std::move(other);
    return cfg;
}

struct Report {
    std::string task;
    std::string config_hash;
    CheckReport checks;
    json data = json::object();

    bool pass() const { return checks.pass(); }
};

namespace detail {

inline void append(CheckReport& into, const CheckReport& from, const std::string& prefix) {
    for (auto e : from.entries) {
        e.name = prefix + e.name;
        into.entries.push_back(std::move(e));
    }
}

}  // namespace detail

inline Report run_config(const RunConfig& cfg) {
    using namespace jsonio;
    Report rep;
    rep.task = task_name(cfg.task);
    rep.config_hash = config_hash(cfg);

    switch (cfg.task) {
        case Task::verify: {
            const ExtensionTriple& t = cfg.model();
            const RelationReport rel = check_relations_lattice(t.family, t.window, cfg.tol);
            for (const auto& e : rel.relations) rep.checks.bound("lattice: " + e.relation, e.max_residual, cfg.tol);
            detail::append(rep.checks, verify_extension(t, {cfg.samples, cfg.seed, cfg.tol}), "extension: ");
            detail::append(rep.checks, check_representation(t, cfg.tol), "representation: ");
            break;
        }
        case Task::spectrum: {
            const AssembledOperator op = assemble_XVW(cfg.model());
            std::vector<double> ev = hermitian_eigenvalues(op.matrix);
            std::sort(ev.begin(), ev.end());
            rep.checks.bound("assembled operator Hermitian", op.hermitian_residual, cfg.tol);
            rep.data["eigenvalues"] = ev;
            rep.data["window"] = to_json(cfg.model().window);
            rep.data["dimension"] = ev.size();
            break;
        }
        case Task::classify: {
            const CommutantProblem prob = CommutantProblem::of(cfg.model());
            const IrreducibilityReport ir = commutant_dim(prob);
            double worst = 0.0;
            json witnesses = json::array();
            for (const auto& b : ir.basis) {
                worst = std::max(worst, intertwining_residual(prob, prob, b));
                witnesses.push_back(to_json(b));
            }
            rep.checks.bound("commutant basis intertwines", worst, cfg.tol);
            rep.data["commutant_dim"] = ir.commutant_dim;
            rep.data["verdict"] = verdict_name(ir.verdict);
            rep.data["witnesses"] = std::move(witnesses);
            break;
        }
        case Task::equiv: {
            if (!cfg.other) throw std::logic_error("equiv run without a second config");
            const EquivalenceResult r = unitary_equivalent(cfg.model(), cfg.other->model());
            rep.checks.flag("decision reached", r.status != Equivalence::undecided, r.reason);
            if (r.witness) {
                rep.checks.bound("witness intertwines", r.witness_residual, cfg.tol);
                rep.checks.bound("witness unitary", r.unitarity_residual, cfg.tol);
                rep.data["witness"] = to_json(*r.witness);
            }
            rep.data["verdict"] = equivalence_name(r.status);
            rep.data["intertwiner_dim"] = r.intertwiner_dim;
            rep.data["reason"] = r.reason;
            break;
        }
        case Task::schrodinger: {
            const auto prm = schrodinger::Params::from_q(cfg.schrodinger_q);
            rep.checks = schrodinger::verify(prm, {static_cast<std::size_t>(cfg.samples), cfg.seed, cfg.tol, 1e-14});
            rep.data["q"] = cfg.schrodinger_q;
            rep.data["alpha"] = prm.alpha;
            rep.data["samples"] = cfg.samples;
            break;
        }
    }
    return rep;
}

enum class Format { json, text };

/// JSON keys come out sorted, so equal reports give identical bytes.
inline std::string emit_report(const Report& rep, Format fmt) {
    if (fmt == Format::json) {
        json out = rep.data;
        out["tool"] = "qheis";
        out["version"] = tool_version;
        out["config_hash"] = rep.config_hash;
        out["task"] = rep.task;
        out["status"] = rep.pass() ? "pass" : "fail";
        out["checks"] = jsonio::to_json(rep.checks);
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "qheis " << tool_version << "  task " << rep.task << "  config " << rep.config_hash << "\n";
    for (const auto& e : rep.checks.entries) {
        os << (e.passed ? "  pass  " : "  FAIL  ") << e.name;
        if (e.tol > 0.0) os << "  (value " << e.value << ", tol " << e.tol << ")";
        if (!e.detail.empty()) os << "  " << e.detail;
        os << "\n";
    }
    for (const auto& [key, value] : rep.data.items()) {
        if (value.is_array() && value.size() > 8)
            os << "  " << key << ": [" << value.size() << " entries]\n";
        else if (!value.is_array() && !value.is_object())
            os << "  " << key << ": " << value.dump() << "\n";
    }
    if (rep.data.contains("eigenvalues")) {
        const auto& ev = rep.data["eigenvalues"];
        if (!ev.empty()) os << "  eigenvalue range: " << ev.front().get<double>() << " .. " << ev.back().get<double>() << "\n";
    }
    os << "status: " << (rep.pass() ? "pass" : "fail") << "\n";
    return os.str();
}

/// Config JSON for one of the standard examples.
inline json example_config(int kind, const ExampleParams& prm = {}, Task task = Task::verify) {
    const ExtensionTriple t = build_example(kind, prm);
    json bmap = jsonio::to_json(t.bmap);
    if (kind == 1) bmap = jsonio::phases_json(0.0, 0.0);
    if (kind == 2) bmap = jsonio::phases_json(prm.phi, prm.psi);
    return {{"task", task_name(task)},
            {"family", jsonio::to_json(t.family)},
            {"window", jsonio::to_json(t.window)},
            {"bmap", std::move(bmap)},
            {"seed", prm.seed}};
}

}  // namespace qheis
