// config.hpp — experiment configuration: JSON schema with per-experiment
// defaults, strict unknown-key rejection (errors name the offending key by
// its JSON pointer path), invariant checks, and a fully resolved echo that
// re-validates to itself.  The resolved JSON is the source of truth; typed
// accessors materialize the pieces solvers need.

#pragma once

#include <dicke/hamiltonians.hpp>
#include <dicke/meanfield.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke::cfg {

using json = nlohmann::json;

// Thrown for anything the `validate` subcommand should report as a
// configuration problem (exit code 2): parse errors, unknown keys, type
// mismatches, invariant violations.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "fig2a", "fig2bc", "fig2d", "fig3", "fig4",
        "s1", "s2", "s3", "s4", "s5", "custom",
    };
    return names;
}

inline bool is_experiment_name(const std::string& s) {
    const auto& n = experiment_names();
    return std::find(n.begin(), n.end(), s) != n.end();
}

// ---------------------------------------------------------------------------
// Defaults
// ---------------------------------------------------------------------------

namespace detail {

inline json base_defaults() {
    return json{
        {"experiment", ""},
        {"model",
         {{"n_atoms", 6},
          {"omega_a", 1.0},
          {"omega_c", 0.75},
          {"kappa", 0.25},
          {"coupling_g", 0.0},
          {"interaction", {{"type", "constant_dipole"}, {"v_dd", -1.0 / 3.0}}}}},
        {"grids", json::object()},
        {"solver",
         {{"eps_sr", 1e-6},
          {"damping", 0.5},
          {"tol", 1e-10},
          {"max_iter", 5000},
          {"seed_scale", 0.1},
          {"g_tol", 1e-4},
          {"g_max", 1.0},
          {"max_unconverged_fraction", 0.05}}},
        {"scan",
         {{"eps_deg", 1e-4}, {"refine_tol", 1e-7}, {"ground_only", true}}},
        {"lindblad",
         {{"enabled", false},
          {"photon_cutoffs", json::array({4, 6, 8})},
          {"dt", 0.0},
          {"t_final", 0.0},
          {"representation", "symmetric"},
          {"steady_tol", 1e-8},
          {"cutoff_rel_tol", 0.01}}},
        {"output", {{"directory", "."}, {"format", "csv"}}},
        {"rng_seed", std::uint64_t{20260822}},
    };
}

inline json range(double min, double max, int points) {
    return json{{"min", min}, {"max", max}, {"points", points}};
}

inline json values(std::initializer_list<double> v) {
    return json{{"values", json(std::vector<double>(v))}};
}

}  // namespace detail

// Complete default configuration for a given experiment.  A minimal user
// file `{"experiment": "fig2a"}` resolves against this.
inline json default_config(const std::string& experiment) {
    if (!is_experiment_name(experiment))
        throw ConfigError("unknown experiment \"" + experiment + "\" at /experiment");
    json d = detail::base_defaults();
    d["experiment"] = experiment;
    using detail::range;
    using detail::values;
    if (experiment == "fig2a") {
        d["grids"] = {{"g", range(0.0, 0.5, 11)}, {"v_dd", values({0.0, -1.0 / 3.0})}};
        d["lindblad"]["enabled"] = true;
        d["lindblad"]["photon_cutoffs"] = json::array({5, 7});
    } else if (experiment == "fig2bc") {
        d["grids"] = {{"inv_v", range(-6.0, -0.1, 60)}, {"g", range(0.0, 0.6, 31)}};
    } else if (experiment == "fig2d") {
        d["grids"] = {{"inv_v", range(-6.0, -0.1, 60)},
                      {"kappa", values({0.125, 0.25, 0.5})}};
    } else if (experiment == "fig3") {
        d["grids"] = {{"inv_v", range(-6.0, -0.4, 57)}};
    } else if (experiment == "fig4") {
        d["model"]["interaction"] = {{"type", "realistic"}, {"c3", -0.57},
                                     {"c6_pp", -11.48},    {"c6_ss", 51.10},
                                     {"c6_sp", -1.0},      {"r0", 1.2}};
        d["grids"] = {{"r0", range(1.0, 2.0, 101)}};
    } else if (experiment == "s1") {
        d["grids"] = {{"g", range(0.0, 0.6, 50)},
                      {"v_dd", values({0.0, -0.2})},
                      {"n_cut", values({1, 2, 3, 4, 5, 6})}};
    } else if (experiment == "s2") {
        d["model"]["n_atoms"] = 20;
        d["grids"] = {{"inv_v", range(-21.0, -0.5, 50)}, {"g", range(0.0, 0.6, 50)}};
    } else if (experiment == "s3") {
        d["model"]["interaction"] = {{"type", "spatial_dipole"}, {"v_dd", -0.3}};
        d["grids"] = {{"v_dd", range(-1.3, -0.05, 126)}};
    } else if (experiment == "s4") {
        d["model"]["interaction"] = {{"type", "vdw_all_to_all"}, {"v_pp", -0.5}};
        d["grids"] = {{"v_pp", range(-2.0, 2.0, 81)}, {"g", range(0.0, 0.6, 41)}};
    } else if (experiment == "s5") {
        d["model"]["interaction"] = {{"type", "realistic"}, {"c3", -0.57},
                                     {"c6_pp", -11.48},    {"c6_ss", 51.10},
                                     {"c6_sp", -1.0},      {"r0", 1.48}};
        d["grids"] = {{"r0", range(1.40, 1.56, 161)}};
    } else if (experiment == "custom") {
        d["grids"] = {{"g", range(0.0, 0.6, 31)}};
    }
    return d;
}

// ---------------------------------------------------------------------------
// Strict merge: user JSON over defaults, rejecting unknown keys
// ---------------------------------------------------------------------------

namespace detail {

inline std::string type_name(const json& j) {
    if (j.is_number_integer()) return "integer";
    if (j.is_number_float()) return "number";
    return j.type_name();
}

// Kind compatibility of a user value against the default occupying the slot:
// float slots accept integer literals, but integer slots only take integers.
inline bool same_kind(const json& a, const json& b) {
    if (a.is_number_integer()) return b.is_number_integer();
    if (a.is_number() && b.is_number()) return true;
    return a.type() == b.type();
}

inline const std::set<std::string>& interaction_keys(const std::string& type) {
    static const std::set<std::string> constant = {"type", "v_dd"};
    static const std::set<std::string> spatial = {"type", "v_dd"};
    static const std::set<std::string> vdw = {"type", "v_pp"};
    static const std::set<std::string> realistic = {"type",  "c3",    "c6_pp",
                                                    "c6_ss", "c6_sp", "r0"};
    if (type == "constant_dipole") return constant;
    if (type == "spatial_dipole") return spatial;
    if (type == "vdw_all_to_all") return vdw;
    if (type == "realistic") return realistic;
    static const std::set<std::string> none = {};
    return none;
}

inline void check_interaction(const json& node, const std::string& path,
                              std::vector<std::string>& errors) {
    if (!node.is_object()) {
        errors.push_back("type error at " + path + ": expected object, got " +
                         type_name(node));
        return;
    }
    if (!node.contains("type") || !node["type"].is_string()) {
        errors.push_back("missing or non-string key " + path + "/type");
        return;
    }
    const std::string type = node["type"].get<std::string>();
    const auto& allowed = interaction_keys(type);
    if (allowed.empty()) {
        errors.push_back("unknown interaction type \"" + type + "\" at " + path +
                         "/type (expected constant_dipole, spatial_dipole, "
                         "vdw_all_to_all, or realistic)");
        return;
    }
    for (const auto& [key, value] : node.items()) {
        if (!allowed.count(key)) {
            errors.push_back("unknown key " + path + "/" + key +
                             " for interaction type \"" + type + "\"");
        } else if (key != "type" && !value.is_number()) {
            errors.push_back("type error at " + path + "/" + key +
                             ": expected number, got " + type_name(value));
        }
    }
    for (const auto& key : allowed)
        if (!node.contains(key))
            errors.push_back("missing key " + path + "/" + key +
                             " for interaction type \"" + type + "\"");
}

inline void check_grid(const json& node, const std::string& path,
                       std::vector<std::string>& errors) {
    if (!node.is_object()) {
        errors.push_back("type error at " + path + ": expected object, got " +
                         type_name(node));
        return;
    }
    const bool has_values = node.contains("values");
    for (const auto& [key, value] : node.items()) {
        if (key == "values") {
            if (!value.is_array())
                errors.push_back("type error at " + path +
                                 "/values: expected array of numbers");
            else
                for (const auto& x : value)
                    if (!x.is_number()) {
                        errors.push_back("type error at " + path +
                                         "/values: expected array of numbers");
                        break;
                    }
        } else if (key == "min" || key == "max") {
            if (has_values)
                errors.push_back("conflicting keys at " + path +
                                 ": give either values or min/max/points");
            else if (!value.is_number())
                errors.push_back("type error at " + path + "/" + key +
                                 ": expected number, got " + type_name(value));
        } else if (key == "points") {
            if (has_values)
                errors.push_back("conflicting keys at " + path +
                                 ": give either values or min/max/points");
            else if (!value.is_number_integer())
                errors.push_back("type error at " + path +
                                 "/points: expected integer, got " + type_name(value));
        } else {
            errors.push_back("unknown key " + path + "/" + key);
        }
    }
    if (!has_values)
        for (const char* key : {"min", "max", "points"})
            if (!node.contains(key))
                errors.push_back("missing key " + path + "/" + key);
}

// Recursively overlays `user` on `base`.  Keys absent from `base` are
// unknown; `interaction` and grid entries are replaced wholesale and
// validated by shape instead (their legal keys depend on a discriminator).
inline void strict_merge(json& base, const json& user, const std::string& path,
                         std::vector<std::string>& errors) {
    if (!user.is_object()) {
        errors.push_back("type error at " + (path.empty() ? "/" : path) +
                         ": expected object, got " + type_name(user));
        return;
    }
    for (const auto& [key, value] : user.items()) {
        const std::string here = path + "/" + key;
        if (path == "/model" && key == "interaction") {
            check_interaction(value, here, errors);
            base[key] = value;
            continue;
        }
        if (path == "/grids") {
            if (!base.contains(key)) {
                errors.push_back("unknown key " + here +
                                 " (not a grid of this experiment)");
                continue;
            }
            check_grid(value, here, errors);
            base[key] = value;
            continue;
        }
        if (!base.contains(key)) {
            errors.push_back("unknown key " + here);
            continue;
        }
        json& slot = base[key];
        if (slot.is_object()) {
            strict_merge(slot, value, here, errors);
        } else if (!same_kind(slot, value)) {
            errors.push_back("type error at " + here + ": expected " +
                             type_name(slot) + ", got " + type_name(value));
        } else {
            slot = value;
        }
    }
}

inline void fail(const std::vector<std::string>& errors) {
    if (errors.empty()) return;
    std::ostringstream os;
    os << "invalid configuration (" << errors.size()
       << (errors.size() == 1 ? " error):" : " errors):");
    for (const auto& e : errors) os << "\n  - " << e;
    throw ConfigError(os.str());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Resolved configuration with typed accessors
// ---------------------------------------------------------------------------

class ResolvedConfig {
  public:
    explicit ResolvedConfig(json resolved) : j_(std::move(resolved)) {}

    const json& raw() const { return j_; }
    std::string experiment() const { return j_.at("experiment").get<std::string>(); }

    model::ModelSpec model() const {
        const json& m = j_.at("model");
        model::ModelSpec spec;
        spec.n_atoms = m.at("n_atoms").get<int>();
        spec.omega_a = m.at("omega_a").get<double>();
        spec.omega_c = m.at("omega_c").get<double>();
        spec.kappa = m.at("kappa").get<double>();
        spec.coupling_g = m.at("coupling_g").get<double>();
        spec.interaction = interaction();
        return spec;
    }

    model::InteractionModel interaction() const {
        const json& i = j_.at("model").at("interaction");
        const std::string type = i.at("type").get<std::string>();
        if (type == "constant_dipole")
            return model::ConstantDipole{i.at("v_dd").get<double>()};
        if (type == "spatial_dipole")
            return model::SpatialDipole{i.at("v_dd").get<double>()};
        if (type == "vdw_all_to_all")
            return model::AllToAllVdw{i.at("v_pp").get<double>()};
        return model::RealisticPotential{
            i.at("c3").get<double>(), i.at("c6_pp").get<double>(),
            i.at("c6_ss").get<double>(), i.at("c6_sp").get<double>(),
            i.at("r0").get<double>()};
    }

    bool has_grid(const std::string& name) const {
        return j_.at("grids").contains(name);
    }

    std::vector<double> grid(const std::string& name) const {
        const json& g = j_.at("grids").at(name);
        if (g.contains("values")) return g["values"].get<std::vector<double>>();
        const double lo = g.at("min").get<double>();
        const double hi = g.at("max").get<double>();
        const int n = g.at("points").get<int>();
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            xs[static_cast<std::size_t>(i)] =
                (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
        return xs;
    }

    std::vector<int> int_grid(const std::string& name) const {
        std::vector<int> out;
        for (double x : grid(name)) out.push_back(static_cast<int>(std::lround(x)));
        return out;
    }

    mf::MeanFieldOptions meanfield_options(int n_atoms) const {
        const json& s = j_.at("solver");
        mf::MeanFieldOptions opt;
        opt.damping = s.at("damping").get<double>();
        opt.tol = s.at("tol").get<double>();
        opt.max_iter = s.at("max_iter").get<int>();
        opt.seed = std::complex<double>(
            s.at("seed_scale").get<double>() * std::sqrt(double(n_atoms)), 0.0);
        return opt;
    }

    double eps_sr() const { return j_.at("solver").at("eps_sr").get<double>(); }
    double g_tol() const { return j_.at("solver").at("g_tol").get<double>(); }
    double g_max() const { return j_.at("solver").at("g_max").get<double>(); }
    double max_unconverged_fraction() const {
        return j_.at("solver").at("max_unconverged_fraction").get<double>();
    }

    collective::DegeneracyScanOptions scan_options() const {
        const json& s = j_.at("scan");
        collective::DegeneracyScanOptions opt;
        opt.eps_deg = s.at("eps_deg").get<double>();
        opt.refine_tol = s.at("refine_tol").get<double>();
        opt.ground_only = s.at("ground_only").get<bool>();
        return opt;
    }

    bool lindblad_enabled() const { return j_.at("lindblad").at("enabled").get<bool>(); }
    std::vector<int> photon_cutoffs() const {
        return j_.at("lindblad").at("photon_cutoffs").get<std::vector<int>>();
    }
    double lindblad_dt() const { return j_.at("lindblad").at("dt").get<double>(); }
    double lindblad_t_final() const {
        return j_.at("lindblad").at("t_final").get<double>();
    }
    std::string representation() const {
        return j_.at("lindblad").at("representation").get<std::string>();
    }
    double steady_tol() const {
        return j_.at("lindblad").at("steady_tol").get<double>();
    }
    double cutoff_rel_tol() const {
        return j_.at("lindblad").at("cutoff_rel_tol").get<double>();
    }

    std::string output_directory() const {
        return j_.at("output").at("directory").get<std::string>();
    }
    std::string output_format() const {
        return j_.at("output").at("format").get<std::string>();
    }
    std::uint64_t rng_seed() const { return j_.at("rng_seed").get<std::uint64_t>(); }

  private:
    json j_;
};

// ---------------------------------------------------------------------------
// Validation pipeline
// ---------------------------------------------------------------------------

namespace detail {

inline void check_invariants(const ResolvedConfig& cfg,
                             std::vector<std::string>& errors) {
    const json& j = cfg.raw();
    const json& m = j.at("model");
    const int n_atoms = m.at("n_atoms").get<int>();
    if (n_atoms < 1)
        errors.push_back("invariant violation at /model/n_atoms: need n_atoms >= 1, got " +
                         std::to_string(n_atoms));
    if (m.at("omega_a").get<double>() <= 0.0)
        errors.push_back("invariant violation at /model/omega_a: need omega_a > 0");
    if (m.at("omega_c").get<double>() <= 0.0)
        errors.push_back("invariant violation at /model/omega_c: need omega_c > 0");
    if (m.at("kappa").get<double>() < 0.0)
        errors.push_back("invariant violation at /model/kappa: need kappa >= 0");
    if (m.at("coupling_g").get<double>() < 0.0)
        errors.push_back("invariant violation at /model/coupling_g: need coupling_g >= 0");
    const json& inter = m.at("interaction");
    if (inter.at("type") == "realistic" && inter.at("r0").get<double>() <= 0.0)
        errors.push_back("invariant violation at /model/interaction/r0: need r0 > 0");

    for (const auto& [name, g] : j.at("grids").items()) {
        const std::string path = "/grids/" + name;
        if (g.contains("values")) {
            if (g["values"].empty())
                errors.push_back("invariant violation at " + path +
                                 "/values: grid must not be empty");
        } else {
            if (g.at("points").get<int>() < 1)
                errors.push_back("invariant violation at " + path +
                                 "/points: need at least 1 point");
            if (g.at("max").get<double>() < g.at("min").get<double>())
                errors.push_back("invariant violation at " + path +
                                 ": need max >= min (negative extent)");
        }
    }

    const json& s = j.at("solver");
    const double damping = s.at("damping").get<double>();
    if (!(damping > 0.0) || damping > 1.0)
        errors.push_back("invariant violation at /solver/damping: need 0 < damping <= 1");
    for (const char* key : {"eps_sr", "tol", "g_tol", "g_max"})
        if (s.at(key).get<double>() <= 0.0)
            errors.push_back(std::string("invariant violation at /solver/") + key +
                             ": need a positive value");
    if (s.at("max_iter").get<int>() < 1)
        errors.push_back("invariant violation at /solver/max_iter: need max_iter >= 1");
    if (s.at("seed_scale").get<double>() <= 0.0)
        errors.push_back("invariant violation at /solver/seed_scale: need seed_scale > 0");
    const double fail_frac = s.at("max_unconverged_fraction").get<double>();
    if (fail_frac < 0.0 || fail_frac > 1.0)
        errors.push_back("invariant violation at /solver/max_unconverged_fraction: "
                         "need a value in [0, 1]");

    const json& sc = j.at("scan");
    if (sc.at("eps_deg").get<double>() <= 0.0)
        errors.push_back("invariant violation at /scan/eps_deg: need eps_deg > 0");
    if (sc.at("refine_tol").get<double>() <= 0.0)
        errors.push_back("invariant violation at /scan/refine_tol: need refine_tol > 0");

    const json& l = j.at("lindblad");
    const auto cuts = l.at("photon_cutoffs").get<std::vector<int>>();
    if (cuts.empty())
        errors.push_back("invariant violation at /lindblad/photon_cutoffs: "
                         "need at least one cutoff");
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (cuts[i] < 1) {
            errors.push_back("invariant violation at /lindblad/photon_cutoffs: "
                             "cutoffs must be >= 1");
            break;
        }
        if (i > 0 && cuts[i] <= cuts[i - 1]) {
            errors.push_back("invariant violation at /lindblad/photon_cutoffs: "
                             "cutoffs must be strictly increasing");
            break;
        }
    }
    const std::string rep = l.at("representation").get<std::string>();
    if (rep != "symmetric" && rep != "full")
        errors.push_back("invariant violation at /lindblad/representation: "
                         "expected \"symmetric\" or \"full\", got \"" + rep + "\"");
    if (rep == "symmetric" && cfg.lindblad_enabled() &&
        inter.at("type").get<std::string>() != "constant_dipole")
        errors.push_back("invariant violation at /lindblad/representation: "
                         "the symmetric-ladder representation requires the "
                         "constant_dipole interaction");
    if (l.at("steady_tol").get<double>() <= 0.0)
        errors.push_back("invariant violation at /lindblad/steady_tol: need a positive value");
    if (l.at("dt").get<double>() < 0.0)
        errors.push_back("invariant violation at /lindblad/dt: need dt >= 0 (0 = automatic)");
    if (l.at("t_final").get<double>() < 0.0)
        errors.push_back("invariant violation at /lindblad/t_final: "
                         "need t_final >= 0 (0 = automatic)");
    if (l.at("cutoff_rel_tol").get<double>() <= 0.0)
        errors.push_back("invariant violation at /lindblad/cutoff_rel_tol: "
                         "need a positive value");

    const std::string format = j.at("output").at("format").get<std::string>();
    if (format != "csv" && format != "json")
        errors.push_back("invariant violation at /output/format: expected \"csv\" "
                         "or \"json\", got \"" + format + "\"");

    // Full-space representations need a tractable atomic dimension.
    const std::string itype = inter.at("type").get<std::string>();
    const bool needs_full_space =
        itype == "spatial_dipole" || itype == "realistic" ||
        cfg.experiment() == "fig2a" || cfg.experiment() == "fig2bc" ||
        cfg.experiment() == "fig2d" || cfg.experiment() == "fig3" ||
        cfg.experiment() == "s1" || cfg.experiment() == "s4";
    if (needs_full_space && n_atoms > 14)
        errors.push_back("invariant violation at /model/n_atoms: this experiment "
                         "diagonalizes the full 2^N atomic space; n_atoms <= 14 "
                         "required (use the symmetric representation for larger N)");
}

}  // namespace detail

// Validates user JSON against the schema + defaults and returns the fully
// resolved configuration.  Throws ConfigError listing every problem found.
inline ResolvedConfig resolve_config(const json& user) {
    std::vector<std::string> errors;
    if (!user.is_object()) throw ConfigError("configuration root must be a JSON object");
    if (!user.contains("experiment"))
        throw ConfigError("missing key /experiment (one of: fig2a, fig2bc, fig2d, "
                          "fig3, fig4, s1, s2, s3, s4, s5, custom)");
    if (!user["experiment"].is_string())
        throw ConfigError("type error at /experiment: expected string");
    const std::string exp = user["experiment"].get<std::string>();
    if (!is_experiment_name(exp))
        throw ConfigError("unknown experiment \"" + exp + "\" at /experiment");

    json resolved = default_config(exp);
    detail::strict_merge(resolved, user, "", errors);
    detail::fail(errors);

    ResolvedConfig cfg(std::move(resolved));
    detail::check_invariants(cfg, errors);
    detail::fail(errors);
    return cfg;
}

inline ResolvedConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    json user;
    try {
        user = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("JSON parse error in " + path + ": " + e.what());
    }
    return resolve_config(user);
}

}  // namespace dicke::cfg
