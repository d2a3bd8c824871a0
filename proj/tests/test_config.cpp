// test_config.cpp — configuration pipeline: defaults, strict unknown-key
// rejection with pointer paths, invariant checks, round-trip stability.

#include "dicke/config.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

using dicke::cfg::ConfigError;
using dicke::cfg::default_config;
using dicke::cfg::load_config;
using dicke::cfg::ResolvedConfig;
using dicke::cfg::resolve_config;
using json = nlohmann::json;

namespace {

// Expects resolve_config to throw and returns the message.
std::string error_of(const json& j) {
    try {
        resolve_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    FAIL("expected a ConfigError");
    return {};
}

}  // namespace

TEST_CASE("minimal config resolves against experiment defaults") {
    const ResolvedConfig cfg = resolve_config(json{{"experiment", "fig2a"}});
    CHECK(cfg.experiment() == "fig2a");
    const auto spec = cfg.model();
    CHECK(spec.n_atoms == 6);
    CHECK(spec.omega_a == 1.0);
    CHECK(spec.omega_c == 0.75);
    CHECK(spec.kappa == 0.25);
    CHECK(cfg.lindblad_enabled());
    CHECK(cfg.grid("g").size() == 11);
    const auto vs = cfg.grid("v_dd");
    REQUIRE(vs.size() == 2);
    CHECK(vs[0] == 0.0);
    CHECK(vs[1] == Catch::Approx(-1.0 / 3.0));
    CHECK(cfg.output_format() == "csv");
}

TEST_CASE("defaults of every experiment are themselves valid") {
    for (const auto& name : dicke::cfg::experiment_names()) {
        INFO("experiment " << name);
        CHECK_NOTHROW(resolve_config(default_config(name)));
    }
}

TEST_CASE("unknown keys are rejected by pointer path") {
    CHECK_THAT(error_of({{"experiment", "fig2a"}, {"model", {{"omega_x", 1.0}}}}),
               Catch::Matchers::ContainsSubstring("/model/omega_x"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"}, {"solver", {{"dampng", 0.3}}}}),
               Catch::Matchers::ContainsSubstring("/solver/dampng"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"}, {"outputs", {{"format", "csv"}}}}),
               Catch::Matchers::ContainsSubstring("/outputs"));
    // Unknown grid name for the experiment.
    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"grids", {{"gg", {{"min", 0.0}, {"max", 1.0}, {"points", 3}}}}}}),
               Catch::Matchers::ContainsSubstring("/grids/gg"));
}

TEST_CASE("experiment selection is checked first") {
    CHECK_THAT(error_of(json::object()), Catch::Matchers::ContainsSubstring("/experiment"));
    CHECK_THAT(error_of({{"experiment", "fig9z"}}),
               Catch::Matchers::ContainsSubstring("fig9z"));
    CHECK_THROWS_AS(resolve_config(json::array()), ConfigError);
}

TEST_CASE("type mismatches name the offending key") {
    CHECK_THAT(error_of({{"experiment", "fig2bc"}, {"model", {{"omega_a", "fast"}}}}),
               Catch::Matchers::ContainsSubstring("/model/omega_a"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"}, {"solver", {{"max_iter", 2.5}}}}),
               Catch::Matchers::ContainsSubstring("/solver/max_iter"));
}

TEST_CASE("invariant violations are reported with their location") {
    CHECK_THAT(error_of({{"experiment", "fig2bc"}, {"model", {{"n_atoms", 0}}}}),
               Catch::Matchers::ContainsSubstring("/model/n_atoms"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"grids", {{"g", {{"min", 1.0}, {"max", 0.0}, {"points", 5}}}}}}),
               Catch::Matchers::ContainsSubstring("/grids/g"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"grids", {{"g", {{"values", json::array()}}}}}}),
               Catch::Matchers::ContainsSubstring("/grids/g"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"}, {"output", {{"format", "xml"}}}}),
               Catch::Matchers::ContainsSubstring("/output/format"));
    // Several problems are reported together.
    const std::string msg =
        error_of({{"experiment", "fig2bc"},
                  {"model", {{"n_atoms", 0}, {"kappa", -1.0}}}});
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("/model/n_atoms"));
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("/model/kappa"));
}

TEST_CASE("interaction node switches type wholesale") {
    const ResolvedConfig cfg = resolve_config(
        {{"experiment", "fig2bc"},
         {"model", {{"interaction", {{"type", "vdw_all_to_all"}, {"v_pp", 0.5}}}}}});
    const auto interaction = cfg.interaction();
    REQUIRE(std::holds_alternative<dicke::model::AllToAllVdw>(interaction));
    CHECK(std::get<dicke::model::AllToAllVdw>(interaction).v_pp == 0.5);

    // Keys from a different interaction type are rejected by path.
    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"model",
                          {{"interaction", {{"type", "constant_dipole"}, {"v_pp", 1.0}}}}}}),
               Catch::Matchers::ContainsSubstring("/model/interaction/v_pp"));
    // Incomplete interaction nodes name the missing key.
    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"model", {{"interaction", {{"type", "realistic"}, {"c3", -0.5}}}}}}),
               Catch::Matchers::ContainsSubstring("/model/interaction/c6_pp"));
    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"model", {{"interaction", {{"type", "coulomb"}, {"q", 1.0}}}}}}),
               Catch::Matchers::ContainsSubstring("interaction type"));
}

TEST_CASE("grids accept ranges or explicit values, not both") {
    const ResolvedConfig cfg = resolve_config(
        {{"experiment", "fig2bc"},
         {"grids", {{"g", {{"values", {0.1, 0.2, 0.7}}}}}}});
    const auto g = cfg.grid("g");
    REQUIRE(g.size() == 3);
    CHECK(g[2] == 0.7);

    const ResolvedConfig one = resolve_config(
        {{"experiment", "fig2bc"},
         {"grids", {{"g", {{"min", 0.3}, {"max", 0.9}, {"points", 1}}}}}});
    REQUIRE(one.grid("g").size() == 1);
    CHECK(one.grid("g")[0] == 0.3);

    CHECK_THAT(error_of({{"experiment", "fig2bc"},
                         {"grids",
                          {{"g", {{"min", 0.0}, {"max", 1.0}, {"points", 3},
                                  {"values", {0.1}}}}}}}),
               Catch::Matchers::ContainsSubstring("either values or min/max/points"));
}

TEST_CASE("symmetric dissipative representation needs homogeneous exchange") {
    CHECK_THAT(
        error_of({{"experiment", "custom"},
                  {"model", {{"interaction", {{"type", "spatial_dipole"}, {"v_dd", -0.3}}}}},
                  {"lindblad", {{"enabled", true}}}}),
        Catch::Matchers::ContainsSubstring("/lindblad/representation"));
    // The full representation accepts any interaction.
    CHECK_NOTHROW(resolve_config(
        {{"experiment", "custom"},
         {"model",
          {{"n_atoms", 3},
           {"interaction", {{"type", "spatial_dipole"}, {"v_dd", -0.3}}}}},
         {"lindblad", {{"enabled", true}, {"representation", "full"}}}}));
}

TEST_CASE("resolved configuration re-validates to itself") {
    const json user = {{"experiment", "s4"},
                       {"model", {{"kappa", 0.3}}},
                       {"grids", {{"v_pp", {{"values", {-1.0, 0.0, 1.0}}}}}},
                       {"output", {{"format", "json"}}}};
    const ResolvedConfig cfg = resolve_config(user);
    const ResolvedConfig again = resolve_config(cfg.raw());
    CHECK(cfg.raw() == again.raw());
    CHECK(cfg.raw().dump() == again.raw().dump());
}

TEST_CASE("config files load with parse diagnostics") {
    const std::string good = "config_good.json";
    {
        std::ofstream os(good);
        os << R"({"experiment": "fig2bc", "model": {"kappa": 0.5}})";
    }
    const ResolvedConfig cfg = load_config(good);
    CHECK(cfg.model().kappa == 0.5);
    std::remove(good.c_str());

    const std::string bad = "config_bad.json";
    {
        std::ofstream os(bad);
        os << R"({"experiment": "fig2bc", )";
    }
    CHECK_THROWS_MATCHES(load_config(bad), ConfigError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("parse error")));
    std::remove(bad.c_str());

    CHECK_THROWS_MATCHES(load_config("no_such_file.json"), ConfigError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("cannot open")));
}

TEST_CASE("integer grids round cleanly") {
    const ResolvedConfig cfg = resolve_config(
        {{"experiment", "s1"}, {"grids", {{"n_cut", {{"values", {1.0, 3.0, 6.0}}}}}}});
    const auto cuts = cfg.int_grid("n_cut");
    REQUIRE(cuts.size() == 3);
    CHECK(cuts[0] == 1);
    CHECK(cuts[2] == 6);
}
