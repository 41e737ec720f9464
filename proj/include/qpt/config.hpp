#pragma once

#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qpt/errors.hpp"
#include "qpt/network.hpp"
#include "qpt/propagation.hpp"
#include "qpt/sweep.hpp"

// Run configuration: one JSON document (or the equivalent command-line
// flags) selects a command and carries its inputs. Parsing is strict —
// unknown keys, wrong types, and out-of-range values are rejected with the
// offending key named — so a typo can never silently fall back to a default.

namespace qpt {

enum class Command { evolve, sweep, asymptote, oracle_check, reproduce };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::evolve: return "evolve";
        case Command::sweep: return "sweep";
        case Command::asymptote: return "asymptote";
        case Command::oracle_check: return "oracle-check";
        case Command::reproduce: return "reproduce";
    }
    return "unknown";
}

// Simulate one trajectory and emit its fidelity/coherence series.
struct EvolveConfig {
    NetworkParams network;
    TimeGrid grid;
    std::size_t start_site = 0;   // zero-based; the config file is 1-based
    std::size_t target_site = 1;
};

// Exhaustive grid scan; ties and (optionally) every record are emitted.
struct SweepConfig {
    SweepSpec spec;
    double tie_tol = 1e-9;
    unsigned threads = 0;  // 0: one worker per hardware thread
    bool keep_all = false;
};

// Long-run behavior of the two-site running averages at a fixed mixing
// angle, sampled once per transfer period.
struct AsymptoteConfig {
    double theta = 0.0;
    double omega = 1.0;
    std::size_t periods = 1;
    std::size_t samples_per_period = 1000;
};

// Randomized closed-form cross-checks of the numerical pipeline.
struct OracleCheckConfig {
    std::uint64_t seed = 12345;
    std::size_t draws = 100;
};

// Recompute one bundled reference table and compare.
struct ReproduceConfig {
    int table_id = 1;
    unsigned threads = 0;
};

// The variant order mirrors Command so the active command is the index.
struct RunConfig {
    std::variant<EvolveConfig, SweepConfig, AsymptoteConfig, OracleCheckConfig, ReproduceConfig>
        payload;

    Command command() const { return static_cast<Command>(payload.index()); }
};

namespace detail {

using Json = nlohmann::json;

inline void check_keys(const Json& obj, std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ValidationError("config: unknown key \"" + item.key() + "\"");
    }
}

inline const Json& require_key(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(std::string("config: missing required key \"") + key + "\"");
    return *it;
}

inline double as_number(const Json& j, const char* key) {
    if (!j.is_number())
        throw ValidationError(std::string("config: key \"") + key + "\" must be a number");
    return j.get<double>();
}

inline std::int64_t as_integer(const Json& j, const char* key) {
    if (!j.is_number_integer())
        throw ValidationError(std::string("config: key \"") + key + "\" must be an integer");
    return j.get<std::int64_t>();
}

inline std::string as_string(const Json& j, const char* key) {
    if (!j.is_string())
        throw ValidationError(std::string("config: key \"") + key + "\" must be a string");
    return j.get<std::string>();
}

inline bool as_boolean(const Json& j, const char* key) {
    if (!j.is_boolean())
        throw ValidationError(std::string("config: key \"") + key + "\" must be a boolean");
    return j.get<bool>();
}

inline std::size_t as_site_index(const Json& j, const char* key, std::size_t n_sites) {
    const std::int64_t v = as_integer(j, key);
    if (v < 1 || v > static_cast<std::int64_t>(n_sites))
        throw ValidationError(std::string("config: key \"") + key + "\" must be a site in 1.." +
                              std::to_string(n_sites));
    return static_cast<std::size_t>(v - 1);
}

inline EvolveConfig parse_evolve(const Json& root) {
    check_keys(root, {"command", "n_sites", "E", "J", "t_max", "dt", "start_site", "target_site"});

    const std::int64_t n_signed = as_integer(require_key(root, "n_sites"), "n_sites");
    if (n_signed < 2 || n_signed > 16)
        throw ValidationError("config: key \"n_sites\" must lie in 2..16");
    const std::size_t n = static_cast<std::size_t>(n_signed);

    EvolveConfig cfg;
    const Json& energies = require_key(root, "E");
    if (!energies.is_array() || energies.size() != n)
        throw ValidationError("config: key \"E\" must be an array of n_sites numbers");
    for (const Json& e : energies) cfg.network.site_energies.push_back(as_number(e, "E"));

    cfg.network.couplings.assign(n, std::vector<double>(n, 0.0));
    const Json& couplings = require_key(root, "J");
    if (couplings.is_number()) {
        if (n != 2)
            throw ValidationError("config: scalar key \"J\" is only valid for n_sites = 2");
        const double j = couplings.get<double>();
        cfg.network.couplings[0][1] = j;
        cfg.network.couplings[1][0] = j;
    } else if (couplings.is_array()) {
        for (const Json& entry : couplings) {
            if (!entry.is_array() || entry.size() != 3)
                throw ValidationError("config: key \"J\" entries must be [i, j, value] triples");
            const std::int64_t i = as_integer(entry[0], "J");
            const std::int64_t j = as_integer(entry[1], "J");
            if (i < 1 || j < 1 || i >= j || j > static_cast<std::int64_t>(n))
                throw ValidationError(
                    "config: key \"J\" needs site pairs with 1 <= i < j <= n_sites");
            const std::size_t a = static_cast<std::size_t>(i - 1);
            const std::size_t b = static_cast<std::size_t>(j - 1);
            if (cfg.network.couplings[a][b] != 0.0)
                throw ValidationError("config: key \"J\" repeats the pair (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            const double value = as_number(entry[2], "J");
            cfg.network.couplings[a][b] = value;
            cfg.network.couplings[b][a] = value;
        }
    } else {
        throw ValidationError("config: key \"J\" must be a number or an array of triples");
    }
    validate_network(cfg.network);

    cfg.grid = TimeGrid(as_number(require_key(root, "t_max"), "t_max"),
                        as_number(require_key(root, "dt"), "dt"));

    cfg.start_site = root.contains("start_site")
                         ? as_site_index(root.at("start_site"), "start_site", n)
                         : 0;
    cfg.target_site = root.contains("target_site")
                          ? as_site_index(root.at("target_site"), "target_site", n)
                          : n - 1;
    return cfg;
}

inline Objective parse_objective(const Json& j) {
    const std::string name = as_string(j, "objective");
    for (Objective obj : {Objective::f_max, Objective::tac_l1_site, Objective::tac_reoc_site,
                          Objective::tac_l1_exciton, Objective::tac_reoc_exciton})
        if (name == objective_name(obj)) return obj;
    throw ValidationError("config: unknown objective \"" + name + "\"");
}

inline SweepConfig parse_sweep(const Json& root) {
    check_keys(root, {"command", "system", "objective", "ranges", "t_max", "dt", "tac_stride",
                      "tie_tol", "threads", "keep_all"});

    const std::string system = as_string(require_key(root, "system"), "system");
    if (system != "dimer" && system != "trimer")
        throw ValidationError("config: key \"system\" must be \"dimer\" or \"trimer\"");

    const Objective objective =
        root.contains("objective") ? parse_objective(root.at("objective")) : Objective::tac_l1_site;

    SweepConfig cfg;
    cfg.spec = system == "dimer" ? SweepSpec::dimer_defaults(objective)
                                 : SweepSpec::trimer_defaults(objective);

    if (root.contains("ranges")) {
        const Json& ranges = root.at("ranges");
        if (!ranges.is_object())
            throw ValidationError("config: key \"ranges\" must map parameter names to ranges");
        const std::vector<std::string> names = param_names(cfg.spec.system);
        for (const auto& item : ranges.items()) {
            std::size_t slot = names.size();
            for (std::size_t i = 0; i < names.size(); ++i)
                if (item.key() == names[i]) {
                    slot = i;
                    break;
                }
            if (slot == names.size())
                throw ValidationError("config: unknown range parameter \"" + item.key() + "\"");
            const Json& r = item.value();
            if (!r.is_object())
                throw ValidationError("config: range \"" + item.key() +
                                      "\" must be an object with min, max, step");
            check_keys(r, {"min", "max", "step"});
            cfg.spec.ranges[slot] = ParamRange{as_number(require_key(r, "min"), "min"),
                                               as_number(require_key(r, "max"), "max"),
                                               as_number(require_key(r, "step"), "step")};
        }
    }

    double t_max = cfg.spec.time.t_max;
    double dt = cfg.spec.time.dt;
    if (root.contains("t_max")) t_max = as_number(root.at("t_max"), "t_max");
    if (root.contains("dt")) dt = as_number(root.at("dt"), "dt");
    cfg.spec.time = TimeGrid(t_max, dt);

    if (root.contains("tac_stride")) {
        const std::int64_t stride = as_integer(root.at("tac_stride"), "tac_stride");
        if (stride < 1) throw ValidationError("config: key \"tac_stride\" must be >= 1");
        cfg.spec.tac_stride = static_cast<std::size_t>(stride);
    }
    if (root.contains("tie_tol")) {
        cfg.tie_tol = as_number(root.at("tie_tol"), "tie_tol");
        if (cfg.tie_tol < 0.0) throw ValidationError("config: key \"tie_tol\" must be >= 0");
    }
    if (root.contains("threads")) {
        const std::int64_t threads = as_integer(root.at("threads"), "threads");
        if (threads < 0) throw ValidationError("config: key \"threads\" must be >= 0");
        cfg.threads = static_cast<unsigned>(threads);
    }
    if (root.contains("keep_all")) cfg.keep_all = as_boolean(root.at("keep_all"), "keep_all");

    validate_sweep_spec(cfg.spec);
    return cfg;
}

inline AsymptoteConfig parse_asymptote(const Json& root) {
    check_keys(root, {"command", "theta", "omega", "periods"});
    AsymptoteConfig cfg;
    cfg.theta = as_number(require_key(root, "theta"), "theta");
    if (!(cfg.theta >= 0.0 && cfg.theta <= std::numbers::pi))
        throw ValidationError("config: key \"theta\" must lie in [0, pi]");
    cfg.omega = as_number(require_key(root, "omega"), "omega");
    if (!(cfg.omega > 0.0)) throw ValidationError("config: key \"omega\" must be > 0");
    const std::int64_t periods = as_integer(require_key(root, "periods"), "periods");
    if (periods < 1 || periods > 100000)
        throw ValidationError("config: key \"periods\" must lie in 1..100000");
    cfg.periods = static_cast<std::size_t>(periods);
    return cfg;
}

inline OracleCheckConfig parse_oracle_check(const Json& root) {
    check_keys(root, {"command", "seed", "draws"});
    OracleCheckConfig cfg;
    if (root.contains("seed")) {
        const std::int64_t seed = as_integer(root.at("seed"), "seed");
        if (seed < 0) throw ValidationError("config: key \"seed\" must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (root.contains("draws")) {
        const std::int64_t draws = as_integer(root.at("draws"), "draws");
        if (draws < 1) throw ValidationError("config: key \"draws\" must be >= 1");
        cfg.draws = static_cast<std::size_t>(draws);
    }
    return cfg;
}

inline ReproduceConfig parse_reproduce(const Json& root) {
    check_keys(root, {"command", "table", "threads"});
    ReproduceConfig cfg;
    const std::int64_t table = as_integer(require_key(root, "table"), "table");
    if (table < 1 || table > 4)
        throw ValidationError("config: key \"table\" must be 1, 2, 3, or 4");
    cfg.table_id = static_cast<int>(table);
    if (root.contains("threads")) {
        const std::int64_t threads = as_integer(root.at("threads"), "threads");
        if (threads < 0) throw ValidationError("config: key \"threads\" must be >= 0");
        cfg.threads = static_cast<unsigned>(threads);
    }
    return cfg;
}

} // namespace detail

inline std::optional<Command> command_from_name(const std::string& name) {
    for (Command c : {Command::evolve, Command::sweep, Command::asymptote, Command::oracle_check,
                      Command::reproduce})
        if (name == command_name(c)) return c;
    return std::nullopt;
}

// Parse one JSON configuration document. The "command" key may be omitted
// when the caller already knows the command (the CLI subcommand); when both
// are present they must agree.
inline RunConfig parse_config(const std::string& text,
                              std::optional<Command> cli_command = std::nullopt) {
    const detail::Json root = detail::Json::parse(text, nullptr, false);
    if (root.is_discarded()) throw ValidationError("config: input is not valid JSON");
    if (!root.is_object()) throw ValidationError("config: top level must be a JSON object");

    Command command;
    if (root.contains("command")) {
        const std::string name = detail::as_string(root.at("command"), "command");
        const std::optional<Command> parsed = command_from_name(name);
        if (!parsed) throw ValidationError("config: unknown command \"" + name + "\"");
        if (cli_command && *cli_command != *parsed)
            throw ValidationError(std::string("config: command \"") + name +
                                  "\" does not match the invoked subcommand \"" +
                                  command_name(*cli_command) + "\"");
        command = *parsed;
    } else if (cli_command) {
        command = *cli_command;
    } else {
        throw ValidationError("config: missing required key \"command\"");
    }

    RunConfig cfg;
    switch (command) {
        case Command::evolve: cfg.payload = detail::parse_evolve(root); break;
        case Command::sweep: cfg.payload = detail::parse_sweep(root); break;
        case Command::asymptote: cfg.payload = detail::parse_asymptote(root); break;
        case Command::oracle_check: cfg.payload = detail::parse_oracle_check(root); break;
        case Command::reproduce: cfg.payload = detail::parse_reproduce(root); break;
    }
    return cfg;
}

} // namespace qpt
