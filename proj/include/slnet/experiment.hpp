#pragma once

// Experiment configuration: a sectioned key = value text file, archivable
// and diff-able. Unknown sections or keys are rejected so a typo cannot
// silently change an experiment. Command-line flags may override any key
// as "section.key=value".
//
// Sections and keys:
//
//   [topology]   kind (ring|complete|edge_list), n, s, path
//   [params]     mu, omega (scalar or comma list), c
//   [initial]    kind (polar|explicit), r (scalar or comma list),
//                theta_min, theta_max, seed, z (re,im pairs ';'-separated)
//   [integrator] scheme (rk4|rkf45), dt, atol, rtol
//   [run]        t_end, sample_every, polar_channels (bool)
//   [output]     dir
//   [scan]       mu_min, mu_max, mu_step, transient_t, measure_t,
//                relax_multiple, perturbation (random|synchronous), scale,
//                observable_node, observable (x|y), threshold

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "slnet/dynamics.hpp"
#include "slnet/graph.hpp"
#include "slnet/scan.hpp"

namespace slnet {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: " + key + ": not a number: '" + v + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: " + key + ": not an unsigned integer: '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int d = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: " + key + ": not an integer: '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: " + key + ": not a boolean: '" + v + "'");
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("config: " + key + ": empty list");
    return out;
}

}  // namespace detail

/// Raw sectioned key-value storage with schema enforcement.
class KeyValueFile {
  public:
    static KeyValueFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str(), path);
    }

    static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<string>") {
        KeyValueFile kv;
        std::istringstream in(text);
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError("config: " + origin + ":" + std::to_string(line_no) + ": malformed section header");
                section = detail::trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw ConfigError("config: " + origin + ":" + std::to_string(line_no) + ": empty section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("config: " + origin + ":" + std::to_string(line_no) + ": expected key = value");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config: " + origin + ":" + std::to_string(line_no) + ": empty key");
            if (section.empty()) throw ConfigError("config: " + origin + ":" + std::to_string(line_no) + ": key outside any [section]");
            kv.values_[section + "." + key] = value;
        }
        return kv;
    }

    /// "section.key=value" override, applied after file parsing.
    void set(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) throw ConfigError("config: override must look like section.key=value");
        const std::string key = detail::trim(assignment.substr(0, eq));
        if (key.find('.') == std::string::npos) throw ConfigError("config: override key must be section.key");
        values_[key] = detail::trim(assignment.substr(eq + 1));
    }

    std::optional<std::string> get(const std::string& dotted) const {
        const auto it = values_.find(dotted);
        if (it == values_.end()) return std::nullopt;
        consumed_.insert(dotted);
        return it->second;
    }

    std::string require(const std::string& dotted) const {
        const auto v = get(dotted);
        if (!v) throw ConfigError("config: missing required key " + dotted);
        return *v;
    }

    /// Every present key must have been consumed by now.
    void reject_unknown() const {
        for (const auto& [k, v] : values_)
            if (!consumed_.count(k)) throw ConfigError("config: unknown key " + k);
    }

  private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

struct ExperimentConfig {
    NetworkTopology topology;
    double mu = 0.0;
    std::vector<double> omega;
    double c = 0.0;

    enum class InitialKind { Polar, Explicit } initial_kind = InitialKind::Polar;
    std::vector<double> initial_r;  // resolved to one entry per node
    double theta_min = 0.0, theta_max = 0.0;
    std::uint64_t seed = 0;
    State explicit_z;

    Scheme scheme = Rk4{};
    double t_end = 100.0;
    double sample_every = 0.01;
    bool polar_channels = false;
    std::string out_dir = "out";

    std::optional<ScanConfig> scan;

    SystemParams params() const { return SystemParams{mu, omega, c, topology}; }

    State initial_state() const {
        if (initial_kind == InitialKind::Explicit) return explicit_z;
        return seeded_polar_state(initial_r, theta_min, theta_max, seed);
    }
};

namespace detail {

inline std::vector<double> resolve_per_node(const std::string& key, const std::string& raw, int n) {
    std::vector<double> list = parse_double_list(key, raw);
    if (static_cast<int>(list.size()) == 1) return std::vector<double>(n, list.front());
    if (static_cast<int>(list.size()) != n)
        throw ConfigError("config: " + key + ": expected 1 or " + std::to_string(n) + " values");
    return list;
}

}  // namespace detail

/// Build a validated ExperimentConfig. needs_scan demands the [scan]
/// section; otherwise it is optional. Throws ConfigError on any problem.
inline ExperimentConfig load_experiment(const KeyValueFile& kv, bool needs_scan = false) {
    ExperimentConfig cfg;

    const std::string tkind = kv.require("topology.kind");
    try {
        if (tkind == "ring") {
            const int n = detail::parse_int("topology.n", kv.require("topology.n"));
            const int s = detail::parse_int("topology.s", kv.require("topology.s"));
            cfg.topology = build_ring(n, s);
        } else if (tkind == "complete") {
            const int n = detail::parse_int("topology.n", kv.require("topology.n"));
            cfg.topology = build_complete(n);
        } else if (tkind == "edge_list") {
            cfg.topology = load_edge_list(kv.require("topology.path"));
        } else {
            throw ConfigError("config: topology.kind must be ring, complete, or edge_list");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const int n = cfg.topology.n_nodes;

    cfg.mu = detail::parse_double("params.mu", kv.require("params.mu"));
    cfg.omega = detail::resolve_per_node("params.omega", kv.require("params.omega"), n);
    cfg.c = detail::parse_double("params.c", kv.require("params.c"));
    if (cfg.c < 0.0) throw ConfigError("config: params.c must be >= 0");

    const std::string ikind = kv.get("initial.kind").value_or("polar");
    if (ikind == "polar") {
        cfg.initial_kind = ExperimentConfig::InitialKind::Polar;
        cfg.initial_r = detail::resolve_per_node("initial.r", kv.require("initial.r"), n);
        cfg.theta_min = detail::parse_double("initial.theta_min", kv.require("initial.theta_min"));
        cfg.theta_max = detail::parse_double("initial.theta_max", kv.require("initial.theta_max"));
        if (!(cfg.theta_max > cfg.theta_min)) throw ConfigError("config: initial.theta_min must be < initial.theta_max");
        if (const auto s = kv.get("initial.seed")) cfg.seed = detail::parse_u64("initial.seed", *s);
    } else if (ikind == "explicit") {
        cfg.initial_kind = ExperimentConfig::InitialKind::Explicit;
        const std::string raw = kv.require("initial.z");
        std::istringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ';')) {
            const auto list = detail::parse_double_list("initial.z", detail::trim(item));
            if (list.size() != 2) throw ConfigError("config: initial.z: each entry must be re,im");
            cfg.explicit_z.emplace_back(list[0], list[1]);
        }
        if (static_cast<int>(cfg.explicit_z.size()) != n)
            throw ConfigError("config: initial.z: expected " + std::to_string(n) + " entries");
    } else {
        throw ConfigError("config: initial.kind must be polar or explicit");
    }

    const std::string scheme = kv.get("integrator.scheme").value_or("rk4");
    if (scheme == "rk4") {
        Rk4 rk;
        if (const auto v = kv.get("integrator.dt")) rk.dt = detail::parse_double("integrator.dt", *v);
        if (!(rk.dt > 0.0)) throw ConfigError("config: integrator.dt must be positive");
        cfg.scheme = rk;
    } else if (scheme == "rkf45") {
        Rkf45 rk;
        if (const auto v = kv.get("integrator.atol")) rk.atol = detail::parse_double("integrator.atol", *v);
        if (const auto v = kv.get("integrator.rtol")) rk.rtol = detail::parse_double("integrator.rtol", *v);
        if (!(rk.atol > 0.0) || !(rk.rtol > 0.0)) throw ConfigError("config: integrator tolerances must be positive");
        cfg.scheme = rk;
    } else {
        throw ConfigError("config: integrator.scheme must be rk4 or rkf45");
    }

    cfg.t_end = detail::parse_double("run.t_end", kv.get("run.t_end").value_or("100"));
    cfg.sample_every = detail::parse_double("run.sample_every", kv.get("run.sample_every").value_or("0.01"));
    if (!(cfg.t_end > 0.0)) throw ConfigError("config: run.t_end must be positive");
    if (!(cfg.sample_every > 0.0)) throw ConfigError("config: run.sample_every must be positive");
    if (const auto v = kv.get("run.polar_channels")) cfg.polar_channels = detail::parse_bool("run.polar_channels", *v);
    if (const auto v = kv.get("output.dir")) cfg.out_dir = *v;

    const bool has_scan = kv.get("scan.mu_min").has_value() || kv.get("scan.mu_max").has_value();
    if (needs_scan && !has_scan) throw ConfigError("config: [scan] section with mu_min/mu_max required");
    if (has_scan) {
        ScanConfig sc;
        sc.topology = cfg.topology;
        sc.omega = cfg.omega;
        sc.c = cfg.c;
        sc.scheme = cfg.scheme;
        sc.sample_every = cfg.sample_every;
        sc.seed = cfg.seed;
        const double lo = detail::parse_double("scan.mu_min", kv.require("scan.mu_min"));
        const double hi = detail::parse_double("scan.mu_max", kv.require("scan.mu_max"));
        const double step = detail::parse_double("scan.mu_step", kv.require("scan.mu_step"));
        if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("config: scan grid must satisfy mu_min <= mu_max, mu_step > 0");
        // index-based grid: lo + i*step avoids accumulated rounding drift
        const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (int i = 0; i < count; ++i) sc.mu_grid.push_back(lo + i * step);
        if (const auto v = kv.get("scan.transient_t")) sc.transient_T = detail::parse_double("scan.transient_t", *v);
        if (const auto v = kv.get("scan.measure_t")) sc.measure_T = detail::parse_double("scan.measure_t", *v);
        if (const auto v = kv.get("scan.relax_multiple")) sc.relax_multiple = detail::parse_double("scan.relax_multiple", *v);
        if (const auto v = kv.get("scan.scale")) sc.perturbation_scale = detail::parse_double("scan.scale", *v);
        if (const auto v = kv.get("scan.threshold")) sc.decay_threshold = detail::parse_double("scan.threshold", *v);
        if (const auto v = kv.get("scan.observable_node")) sc.observable_node = detail::parse_int("scan.observable_node", *v);
        if (const auto v = kv.get("scan.observable")) {
            if (*v == "x") sc.observable = ScanConfig::Coordinate::X;
            else if (*v == "y") sc.observable = ScanConfig::Coordinate::Y;
            else throw ConfigError("config: scan.observable must be x or y");
        }
        if (const auto v = kv.get("scan.perturbation")) {
            if (*v == "random") sc.perturbation = ScanConfig::Perturbation::SeededRandom;
            else if (*v == "synchronous") sc.perturbation = ScanConfig::Perturbation::Synchronous;
            else throw ConfigError("config: scan.perturbation must be random or synchronous");
        }
        cfg.scan = std::move(sc);
    }

    kv.reject_unknown();
    return cfg;
}

}  // namespace slnet
