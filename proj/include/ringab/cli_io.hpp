// Configuration documents, result serialization, and the command-line entry
// point.
//
// Config files are strict-schema JSON: unknown keys are rejected, physical
// parameters have no hidden defaults, and validation reports every violation
// found rather than the first. Output files are deterministic byte-for-byte
// given the same config and seed: CSV doubles carry 17 significant digits,
// lines end in LF, and the JSON manifest has a fixed key order with no
// timestamps.
#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringab/common.hpp"
#include "ringab/experiments.hpp"

namespace ringab {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "ringab/1";
inline constexpr const char* kManifestSchema = "ringab-manifest/1";

// ---------------------------------------------------------------------------
// Enum <-> string tables
// ---------------------------------------------------------------------------

namespace detail {

inline const std::map<std::string, ExperimentKind>& experiment_names() {
    static const std::map<std::string, ExperimentKind> table = {
        {"flux_sweep", ExperimentKind::flux_sweep},
        {"crossover_scan", ExperimentKind::crossover_scan},
        {"quantized_flux_check", ExperimentKind::quantized_flux_check},
        {"frame_equivalence", ExperimentKind::frame_equivalence},
        {"negative_control", ExperimentKind::negative_control},
    };
    return table;
}

inline const std::map<std::string, StateRecipe>& recipe_names() {
    static const std::map<std::string, StateRecipe> table = {
        {"thermal_damped", StateRecipe::thermal_damped},
        {"ground_state", StateRecipe::ground_state},
        {"plane_wave", StateRecipe::plane_wave},
        {"maximally_mixed", StateRecipe::maximally_mixed},
        {"site_localized", StateRecipe::site_localized},
        {"gaussian_packet", StateRecipe::gaussian_packet},
    };
    return table;
}

inline const std::map<std::string, EvolutionMode>& mode_names() {
    static const std::map<std::string, EvolutionMode> table = {
        {"exact_unitary", EvolutionMode::exact_unitary},
        {"dephased", EvolutionMode::dephased},
        {"band_truncated", EvolutionMode::band_truncated},
    };
    return table;
}

inline const std::map<std::string, KernelKind>& kernel_names() {
    static const std::map<std::string, KernelKind> table = {
        {"triangular", KernelKind::triangular},
        {"triangular_wrapped", KernelKind::triangular_wrapped},
        {"gaussian", KernelKind::gaussian},
    };
    return table;
}

template <typename T>
inline std::string name_of(const std::map<std::string, T>& table, T value) {
    for (const auto& [name, v] : table)
        if (v == value) return name;
    throw std::logic_error("name_of: unmapped enum value");
}

/// %.17g: enough digits to round-trip a binary64 in decimal text.
inline std::string format_double(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace detail {

class ConfigReader {
public:
    explicit ConfigReader(const ordered_json& root) : root_(root) {}

    std::vector<std::string> errors;

    void fail(const std::string& message) { errors.push_back(message); }

    const ordered_json* section(const std::string& key, bool required) {
        if (!root_.contains(key)) {
            if (required) fail("missing required section '" + key + "'");
            return nullptr;
        }
        if (!root_.at(key).is_object()) {
            fail("section '" + key + "' must be an object");
            return nullptr;
        }
        return &root_.at(key);
    }

    void check_keys(const ordered_json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
        for (const auto& item : obj.items())
            if (!allowed.count(item.key()))
                fail("unknown key '" + item.key() + "' in " + where);
    }

    template <typename T>
    std::optional<T> value(const ordered_json& obj, const std::string& where,
                           const std::string& key, bool required) {
        if (!obj.contains(key)) {
            if (required) fail(where + ": missing required key '" + key + "'");
            return std::nullopt;
        }
        try {
            return obj.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            fail(where + ": key '" + key + "' has the wrong type");
            return std::nullopt;
        }
    }

    const ordered_json& root() const { return root_; }

private:
    const ordered_json& root_;
};

inline StateSpec parse_state(ConfigReader& reader, const ordered_json& obj, int n_sites) {
    StateSpec state;
    const auto recipe_name = reader.value<std::string>(obj, "state", "recipe", true);
    if (!recipe_name) return state;
    const auto it = recipe_names().find(*recipe_name);
    if (it == recipe_names().end()) {
        reader.fail("state: unknown recipe '" + *recipe_name + "'");
        return state;
    }
    state.recipe = it->second;

    std::set<std::string> allowed = {"recipe"};
    switch (state.recipe) {
        case StateRecipe::thermal_damped: {
            allowed.insert("beta");
            if (const auto beta = reader.value<double>(obj, "state", "beta", true)) {
                if (*beta < 0.0) reader.fail("state: beta must be >= 0");
                state.beta = *beta;
            }
            break;
        }
        case StateRecipe::plane_wave: {
            allowed.insert("momentum");
            if (const auto k = reader.value<int>(obj, "state", "momentum", true))
                state.momentum = *k;
            break;
        }
        case StateRecipe::site_localized: {
            allowed.insert("site");
            if (const auto site = reader.value<int>(obj, "state", "site", true)) {
                if (*site < 0 || (n_sites > 0 && *site >= n_sites))
                    reader.fail("state: site out of range [0, n_sites)");
                state.site = *site;
            }
            break;
        }
        case StateRecipe::gaussian_packet: {
            allowed.insert("site");
            allowed.insert("width");
            if (const auto site = reader.value<int>(obj, "state", "site", true)) {
                if (*site < 0 || (n_sites > 0 && *site >= n_sites))
                    reader.fail("state: site out of range [0, n_sites)");
                state.site = *site;
            }
            if (const auto width = reader.value<double>(obj, "state", "width", true)) {
                if (*width <= 0.0) reader.fail("state: width must be positive");
                state.width = *width;
            }
            break;
        }
        case StateRecipe::ground_state:
        case StateRecipe::maximally_mixed:
            break;
    }
    reader.check_keys(obj, "state", allowed);
    return state;
}

inline EvolutionParams parse_evolution(ConfigReader& reader, const ordered_json& obj,
                                       ExperimentKind kind) {
    EvolutionParams evo;
    std::set<std::string> allowed = {"mode", "dt", "n_steps", "snapshot_stride"};
    const auto mode_name = reader.value<std::string>(obj, "evolution", "mode", true);
    if (mode_name) {
        const auto it = mode_names().find(*mode_name);
        if (it == mode_names().end()) {
            reader.fail("evolution: unknown mode '" + *mode_name + "'");
        } else {
            evo.mode = it->second;
        }
    }
    if (kind == ExperimentKind::crossover_scan && evo.mode != EvolutionMode::dephased)
        reader.fail("evolution: crossover_scan requires mode 'dephased'");
    if (kind == ExperimentKind::flux_sweep && evo.mode != EvolutionMode::band_truncated)
        reader.fail("evolution: flux_sweep requires mode 'band_truncated'");
    if (kind == ExperimentKind::frame_equivalence && evo.mode != EvolutionMode::band_truncated)
        reader.fail("evolution: frame_equivalence requires mode 'band_truncated'");

    if (const auto dt = reader.value<double>(obj, "evolution", "dt", true)) {
        if (*dt <= 0.0) reader.fail("evolution: dt must be positive");
        evo.dt = *dt;
    }
    if (const auto steps = reader.value<int>(obj, "evolution", "n_steps", true)) {
        if (*steps < 1) reader.fail("evolution: n_steps must be >= 1");
        evo.n_steps = *steps;
    }
    if (const auto stride = reader.value<int>(obj, "evolution", "snapshot_stride", false)) {
        if (*stride < 1) reader.fail("evolution: snapshot_stride must be >= 1");
        evo.snapshot_stride = *stride;
    }
    if (evo.mode == EvolutionMode::dephased) {
        allowed.insert("gamma");
        if (const auto gamma = reader.value<double>(obj, "evolution", "gamma", true)) {
            if (*gamma < 0.0) reader.fail("evolution: gamma must be >= 0");
            evo.gamma = *gamma;
        }
    }
    if (kind == ExperimentKind::flux_sweep || kind == ExperimentKind::frame_equivalence) {
        allowed.insert("kernel");
        if (const auto kernel = reader.value<std::string>(obj, "evolution", "kernel", false)) {
            const auto it = kernel_names().find(*kernel);
            if (it == kernel_names().end()) {
                reader.fail("evolution: unknown kernel '" + *kernel + "'");
            } else {
                evo.kernel = it->second;
            }
        }
        if (evo.kernel == KernelKind::gaussian) {
            allowed.insert("sigma");
            if (const auto sigma = reader.value<double>(obj, "evolution", "sigma", true)) {
                if (*sigma <= 0.0) reader.fail("evolution: sigma must be positive");
                evo.sigma = *sigma;
            }
        }
    }
    reader.check_keys(obj, "evolution", allowed);
    return evo;
}

inline FluxGridSpec parse_flux_grid(ConfigReader& reader, const ordered_json& obj) {
    FluxGridSpec grid;
    reader.check_keys(obj, "flux_grid", {"min", "max", "points"});
    const auto min = reader.value<double>(obj, "flux_grid", "min", true);
    const auto max = reader.value<double>(obj, "flux_grid", "max", true);
    const auto points = reader.value<int>(obj, "flux_grid", "points", true);
    if (min) grid.min = *min;
    if (max) grid.max = *max;
    if (points) grid.points = *points;
    if (min && max && *min >= *max) reader.fail("flux_grid: min must be below max");
    if (points && *points < 2) reader.fail("flux_grid: points must be >= 2");
    return grid;
}

} // namespace detail

/// Parses and validates a configuration document, resolving documented
/// defaults (flux grids) into the returned spec. Throws ConfigError carrying
/// every violation found.
inline ExperimentSpec parse_config_json(const ordered_json& root) {
    detail::ConfigReader reader(root);
    ExperimentSpec spec;

    if (!root.is_object()) throw ConfigError({"config root must be a JSON object"});

    const auto schema = reader.value<std::string>(root, "config", "schema", true);
    if (schema && *schema != kConfigSchema)
        reader.fail("schema: expected '" + std::string(kConfigSchema) + "', got '" + *schema +
                    "'");

    const auto experiment = reader.value<std::string>(root, "config", "experiment", true);
    if (experiment) {
        const auto it = detail::experiment_names().find(*experiment);
        if (it == detail::experiment_names().end())
            reader.fail("experiment: unknown kind '" + *experiment + "'");
        else
            spec.kind = it->second;
    }
    if (!reader.errors.empty()) throw ConfigError(reader.errors);

    if (const auto seed = reader.value<std::uint64_t>(root, "config", "seed", true))
        spec.seed = *seed;
    if (const auto out = reader.value<std::string>(root, "config", "output_dir", false))
        spec.output_dir = *out;

    // ring section (always required)
    if (const auto* ring = reader.section("ring", true)) {
        reader.check_keys(*ring, "ring", {"n_sites", "charge", "hop", "disorder"});
        if (const auto n = reader.value<int>(*ring, "ring", "n_sites", true)) {
            if (*n < 3) reader.fail("ring: n_sites must be >= 3");
            spec.ring.n_sites = *n;
        }
        if (const auto q = reader.value<int>(*ring, "ring", "charge", true)) {
            if (*q == 0) reader.fail("ring: charge must be nonzero");
            spec.ring.charge = *q;
        }
        if (const auto hop = reader.value<double>(*ring, "ring", "hop", false)) {
            if (*hop <= 0.0) reader.fail("ring: hop must be positive");
            spec.ring.hop = *hop;
        }
        if (const auto dis = reader.value<double>(*ring, "ring", "disorder", false)) {
            if (*dis < 0.0) reader.fail("ring: disorder must be >= 0");
            spec.ring.disorder = *dis;
        }
    }

    const bool wants_grid = spec.kind == ExperimentKind::flux_sweep ||
                            spec.kind == ExperimentKind::crossover_scan ||
                            spec.kind == ExperimentKind::quantized_flux_check;
    const bool wants_single_flux = spec.kind == ExperimentKind::frame_equivalence ||
                                   spec.kind == ExperimentKind::negative_control;
    const bool wants_bandwidth = spec.kind == ExperimentKind::flux_sweep ||
                                 spec.kind == ExperimentKind::crossover_scan ||
                                 spec.kind == ExperimentKind::frame_equivalence;
    const bool wants_state = spec.kind == ExperimentKind::flux_sweep;
    const bool wants_evolution = spec.kind == ExperimentKind::flux_sweep ||
                                 spec.kind == ExperimentKind::crossover_scan ||
                                 spec.kind == ExperimentKind::frame_equivalence;

    std::set<std::string> allowed_top = {"schema", "experiment", "seed", "output_dir", "ring"};
    if (wants_grid) allowed_top.insert("flux_grid");
    if (wants_single_flux) allowed_top.insert("flux");
    if (wants_bandwidth) allowed_top.insert("bandwidth");
    if (wants_state) allowed_top.insert("state");
    if (wants_evolution) allowed_top.insert("evolution");
    if (spec.kind == ExperimentKind::crossover_scan) allowed_top.insert("scan_sizes");
    reader.check_keys(root, "config", allowed_top);

    if (wants_bandwidth) {
        if (const auto a = reader.value<int>(root, "config", "bandwidth", true)) {
            spec.bandwidth = *a;
            if (*a < 1) reader.fail("bandwidth: must be >= 1");
            // For experiments that build the restricted gauge the band must
            // stay below half the shortest path around the ring.
            const bool builds_gauge = spec.kind == ExperimentKind::flux_sweep ||
                                      spec.kind == ExperimentKind::frame_equivalence;
            if (builds_gauge && spec.ring.n_sites > 0 && 2 * *a >= spec.ring.n_sites)
                reader.fail("bandwidth: must satisfy a < n_sites/2 = " +
                            std::to_string(spec.ring.n_sites / 2.0) +
                            " (half the shortest path around the ring)");
        }
    }

    if (wants_state) {
        if (const auto* state = reader.section("state", true))
            spec.state = detail::parse_state(reader, *state, spec.ring.n_sites);
    }

    if (wants_evolution) {
        const bool required = spec.kind != ExperimentKind::flux_sweep;
        if (const auto* evolution = reader.section("evolution", required))
            spec.evolution = detail::parse_evolution(reader, *evolution, spec.kind);
        else if (spec.kind == ExperimentKind::flux_sweep)
            spec.evolution = EvolutionParams{};  // no relaxation steps
    }

    if (wants_grid) {
        if (const auto* grid = reader.section("flux_grid", false)) {
            spec.flux_grid = detail::parse_flux_grid(reader, *grid);
        } else if (spec.kind == ExperimentKind::quantized_flux_check) {
            spec.flux_grid = FluxGridSpec{-2.0, 2.0, 41};
        } else {
            // Documented default: 33 points across one expected flux period.
            const int q = spec.ring.charge == 0 ? 1 : std::abs(spec.ring.charge);
            spec.flux_grid = FluxGridSpec{0.0, 1.0 / q, 33};
        }
    }

    if (wants_single_flux) {
        if (const auto f = reader.value<double>(root, "config", "flux", true)) spec.flux = *f;
    }

    if (spec.kind == ExperimentKind::crossover_scan) {
        if (!root.contains("scan_sizes")) {
            reader.fail("missing required key 'scan_sizes'");
        } else {
            try {
                spec.scan_sizes = root.at("scan_sizes").get<std::vector<int>>();
            } catch (const nlohmann::json::exception&) {
                reader.fail("scan_sizes: must be an array of integers");
            }
            if (spec.scan_sizes.size() < 4)
                reader.fail("scan_sizes: need at least 4 ring sizes");
            for (std::size_t i = 0; i < spec.scan_sizes.size(); ++i) {
                if (spec.scan_sizes[i] < 3) reader.fail("scan_sizes: every size must be >= 3");
                if (i > 0 && spec.scan_sizes[i] <= spec.scan_sizes[i - 1])
                    reader.fail("scan_sizes: sizes must be strictly increasing");
            }
        }
    }

    if (!reader.errors.empty()) throw ConfigError(reader.errors);
    return spec;
}

inline ExperimentSpec parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    ordered_json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }
    return parse_config_json(root);
}

/// Inverse of parse_config_json on resolved specs: emits exactly the
/// sections the experiment kind consumes.
inline ordered_json serialize_config(const ExperimentSpec& spec) {
    ordered_json root;
    root["schema"] = kConfigSchema;
    root["experiment"] = detail::name_of(detail::experiment_names(), spec.kind);
    root["seed"] = spec.seed;
    if (!spec.output_dir.empty()) root["output_dir"] = spec.output_dir;

    ordered_json ring;
    ring["n_sites"] = spec.ring.n_sites;
    ring["charge"] = spec.ring.charge;
    ring["hop"] = spec.ring.hop;
    ring["disorder"] = spec.ring.disorder;
    root["ring"] = ring;

    const bool wants_grid = spec.kind == ExperimentKind::flux_sweep ||
                            spec.kind == ExperimentKind::crossover_scan ||
                            spec.kind == ExperimentKind::quantized_flux_check;

    if (spec.kind == ExperimentKind::flux_sweep || spec.kind == ExperimentKind::crossover_scan ||
        spec.kind == ExperimentKind::frame_equivalence)
        root["bandwidth"] = spec.bandwidth;

    if (spec.kind == ExperimentKind::flux_sweep) {
        ordered_json state;
        state["recipe"] = detail::name_of(detail::recipe_names(), spec.state.recipe);
        switch (spec.state.recipe) {
            case StateRecipe::thermal_damped: state["beta"] = spec.state.beta; break;
            case StateRecipe::plane_wave: state["momentum"] = spec.state.momentum; break;
            case StateRecipe::site_localized: state["site"] = spec.state.site; break;
            case StateRecipe::gaussian_packet:
                state["site"] = spec.state.site;
                state["width"] = spec.state.width;
                break;
            default: break;
        }
        root["state"] = state;
    }

    const bool has_evolution =
        (spec.kind == ExperimentKind::flux_sweep && spec.evolution.n_steps > 0) ||
        spec.kind == ExperimentKind::crossover_scan ||
        spec.kind == ExperimentKind::frame_equivalence;
    if (has_evolution) {
        ordered_json evolution;
        evolution["mode"] = detail::name_of(detail::mode_names(), spec.evolution.mode);
        evolution["dt"] = spec.evolution.dt;
        evolution["n_steps"] = spec.evolution.n_steps;
        if (spec.evolution.mode == EvolutionMode::dephased)
            evolution["gamma"] = spec.evolution.gamma;
        if (spec.kind == ExperimentKind::flux_sweep ||
            spec.kind == ExperimentKind::frame_equivalence) {
            evolution["kernel"] = detail::name_of(detail::kernel_names(), spec.evolution.kernel);
            if (spec.evolution.kernel == KernelKind::gaussian)
                evolution["sigma"] = spec.evolution.sigma;
        }
        evolution["snapshot_stride"] = spec.evolution.snapshot_stride;
        root["evolution"] = evolution;
    }

    if (wants_grid) {
        ordered_json grid;
        grid["min"] = spec.flux_grid.min;
        grid["max"] = spec.flux_grid.max;
        grid["points"] = spec.flux_grid.points;
        root["flux_grid"] = grid;
    }
    if (spec.kind == ExperimentKind::frame_equivalence ||
        spec.kind == ExperimentKind::negative_control)
        root["flux"] = spec.flux;
    if (spec.kind == ExperimentKind::crossover_scan) root["scan_sizes"] = spec.scan_sizes;
    return root;
}

// ---------------------------------------------------------------------------
// Result serialization
// ---------------------------------------------------------------------------

inline std::string csv_text(const ExperimentResult& result) {
    std::string out;
    if (result.kind == ExperimentKind::crossover_scan) {
        out += "n_sites,amplitude,regime\n";
        for (const auto& row : result.crossover_rows)
            out += std::to_string(row.n_sites) + "," + detail::format_double(row.amplitude) +
                   "," + row.regime + "\n";
    } else {
        out += "flux,observable,value\n";
        for (const auto& row : result.sweep_rows)
            out += detail::format_double(row.flux) + "," + row.observable + "," +
                   detail::format_double(row.value) + "\n";
    }
    return out;
}

inline ordered_json manifest_json(const ExperimentSpec& spec, const ExperimentResult& result) {
    ordered_json manifest;
    manifest["schema"] = kManifestSchema;
    manifest["artifact_version"] = kVersion;
    manifest["spec"] = serialize_config(spec);
    manifest["seed"] = spec.seed;
    ordered_json assertions = ordered_json::array();
    for (const auto& a : result.assertions) {
        ordered_json entry;
        entry["name"] = a.name;
        entry["expected"] = a.expected;
        entry["observed"] = a.observed;
        entry["tolerance"] = a.tolerance;
        entry["pass"] = a.pass;
        assertions.push_back(entry);
    }
    manifest["assertions"] = assertions;
    manifest["all_passed"] = result.all_passed();
    return manifest;
}

struct OutputPaths {
    std::filesystem::path csv;
    std::filesystem::path manifest;
};

inline OutputPaths write_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string stem = detail::name_of(detail::experiment_names(), spec.kind);
    OutputPaths paths{out_dir / (stem + ".csv"), out_dir / (stem + ".manifest.json")};
    {
        std::ofstream csv(paths.csv, std::ios::binary);
        csv << csv_text(result);
    }
    {
        std::ofstream manifest(paths.manifest, std::ios::binary);
        manifest << manifest_json(spec, result).dump(2) << "\n";
    }
    return paths;
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

namespace detail {

inline const std::map<std::string, ExperimentKind>& subcommand_kinds() {
    static const std::map<std::string, ExperimentKind> table = {
        {"sweep", ExperimentKind::flux_sweep},
        {"crossover", ExperimentKind::crossover_scan},
        {"check-flux", ExperimentKind::quantized_flux_check},
        {"frame-eq", ExperimentKind::frame_equivalence},
        {"control", ExperimentKind::negative_control},
    };
    return table;
}

} // namespace detail

/// Exit codes: 0 all assertions pass (or validation succeeded), 1 assertion
/// failure, 2 configuration/spec errors. Wall-clock goes to stderr so output
/// files stay bit-identical across reruns.
inline int run_cli(int argc, const char* const* argv);

} // namespace ringab

#include <chrono>

#include <CLI11.hpp>

namespace ringab {

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"flux-threaded ring laboratory: band-limited states vs the Aharonov-Bohm effect"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    bool quiet = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "path to a JSON config document")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed_override, "seed override (64-bit unsigned)");
        cmd->add_flag("--quiet", quiet, "suppress stdout reporting");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate a config");
    add_common(validate_cmd);
    for (const auto& [name, kind] : detail::subcommand_kinds()) {
        CLI::App* cmd = app.add_subcommand(
            name, "run the " + detail::name_of(detail::experiment_names(), kind) + " experiment");
        add_common(cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ExperimentSpec spec;
    try {
        spec = parse_config(config_path);
    } catch (const ConfigError& e) {
        for (const auto& violation : e.violations) std::cerr << "config error: " << violation << "\n";
        return 2;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    if (subcommand == "validate") {
        if (!quiet) std::cout << "configuration valid: " << config_path << "\n";
        return 0;
    }
    if (detail::subcommand_kinds().at(subcommand) != spec.kind) {
        std::cerr << "config error: subcommand '" << subcommand << "' does not match experiment '"
                  << detail::name_of(detail::experiment_names(), spec.kind) << "'\n";
        return 2;
    }
    if (seed_override) spec.seed = *seed_override;

    std::filesystem::path resolved_out;
    if (!out_dir.empty()) {
        resolved_out = out_dir;
    } else if (!spec.output_dir.empty()) {
        resolved_out = spec.output_dir;
    } else if (const char* env = std::getenv("RINGAB_OUT")) {
        resolved_out = env;
    } else {
        resolved_out = ".";
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const ExperimentResult result = run_experiment(spec);
        const auto paths = write_outputs(spec, result, resolved_out);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::cerr << "wall-clock: " << elapsed.count() << " s\n";
        if (!quiet) {
            for (const auto& a : result.assertions)
                std::cout << (a.pass ? "[PASS] " : "[FAIL] ") << a.name
                          << " (expected " << a.expected
                          << ", observed " << detail::format_double(a.observed) << ")\n";
            std::cout << "wrote " << paths.csv.string() << "\n";
            std::cout << "wrote " << paths.manifest.string() << "\n";
        }
        return result.all_passed() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ringab
