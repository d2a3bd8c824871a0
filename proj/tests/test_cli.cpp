// test_cli.cpp — drives the installed command-line binary end to end and
// checks the exit-code contract: 0 success, 2 configuration error, 3 solver
// failure.

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(DICKE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[512];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_config(const std::string& name, const json& j) {
    const fs::path dir = "cli_cfg";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
}

}  // namespace

TEST_CASE("list-experiments names every driver") {
    const CliResult r = run_cli("list-experiments");
    CHECK(r.exit_code == 0);
    for (const char* name : {"fig2a", "fig2bc", "fig2d", "fig3", "fig4", "s1", "s2",
                             "s3", "s4", "s5", "custom"})
        CHECK(r.output.find(name) != std::string::npos);
}

TEST_CASE("usage errors exit with the configuration code") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("run").exit_code == 2);                 // missing config path
    CHECK(run_cli("run cfg.json --format yaml").exit_code == 2);
    CHECK(run_cli("run cfg.json --threads 0").exit_code == 2);
    CHECK(run_cli("--version").exit_code == 0);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("validate echoes the fully resolved configuration") {
    const auto path = write_config("good.json", {{"experiment", "fig2bc"}});
    const CliResult r = run_cli("validate " + path);
    REQUIRE(r.exit_code == 0);
    const json resolved = json::parse(r.output);
    CHECK(resolved["model"]["omega_c"] == 0.75);
    CHECK(resolved["experiment"] == "fig2bc");
}

TEST_CASE("validate rejects bad configs with a pointer to the problem") {
    const auto path = write_config(
        "bad_key.json", {{"experiment", "fig2bc"}, {"model", {{"omega_x", 1.0}}}});
    const CliResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("/model/omega_x") != std::string::npos);

    CHECK(run_cli("validate cli_cfg/does_not_exist.json").exit_code == 2);
}

TEST_CASE("run writes tables and reports them") {
    const auto path = write_config(
        "tiny.json",
        {{"experiment", "custom"}, {"grids", {{"g", {{"values", {0.0, 0.45}}}}}}});
    fs::remove_all("cli_out");
    const CliResult r = run_cli("run " + path + " --out cli_out --format json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("custom_meanfield.json") != std::string::npos);
    CHECK(fs::exists("cli_out/custom_meanfield.json"));
    CHECK(r.output.find("done:") != std::string::npos);

    // The --threads flag is accepted and changes nothing observable.
    const CliResult threaded =
        run_cli("run " + path + " --out cli_out --format json --threads 2");
    CHECK(threaded.exit_code == 0);
}

TEST_CASE("run distinguishes configuration from solver failures") {
    // Output location blocked by a regular file: configuration error.
    const auto path = write_config(
        "blocked.json",
        {{"experiment", "custom"}, {"grids", {{"g", {{"values", {0.1}}}}}}});
    std::ofstream("cli_cfg/wall") << "x";
    CHECK(run_cli("run " + path + " --out cli_cfg/wall/sub").exit_code == 2);

    // Starved iteration budget with a zero-tolerance convergence policy:
    // solver failure.
    const auto strict = write_config(
        "strict.json",
        {{"experiment", "custom"},
         {"grids", {{"g", {{"values", {0.4}}}}}},
         {"solver", {{"max_iter", 2}, {"max_unconverged_fraction", 0.0}}}});
    const CliResult r = run_cli("run " + strict + " --out cli_out_strict");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("solver failure") != std::string::npos);
}
