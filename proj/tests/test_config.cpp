#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "droplab/config.hpp"
#include "droplab/errors.hpp"

using namespace droplab;

static const char* kSweepText = R"(# a sweep run
[profile]
kind = quadratic
hessian = 1 2 3
rho_max = 4

[droplets]
masses = 0.01 0.01

[sweep]
eta_values = 1e-2 1e-3 1e-4
mode = fixed_delta_rule
restarts = 8

[run]
seed = 42
)";

TEST_CASE("parsing, lookups, and typed getters") {
    const ConfigFile cfg = ConfigFile::parse_string(kSweepText);
    CHECK(cfg.has("profile", "kind"));
    CHECK(!cfg.has("profile", "missing"));
    CHECK(!cfg.has("absent", "kind"));
    CHECK(cfg.get_string("profile", "kind") == "quadratic");
    CHECK(cfg.get_double("profile", "rho_max") == 4.0);
    CHECK(cfg.get_int("sweep", "restarts") == 8);
    CHECK(cfg.get_u64("run", "seed") == 42);
    const auto etas = cfg.get_doubles("sweep", "eta_values");
    REQUIRE(etas.size() == 3);
    CHECK(etas[1] == 1e-3);
    CHECK(cfg.get_double_or("sweep", "quad_order", 16.0) == 16.0);
    CHECK(cfg.get_int_or("sweep", "restarts", 99) == 8);
}

TEST_CASE("syntax errors carry line numbers") {
    auto expect_line = [](const std::string& text, const std::string& fragment) {
        try {
            ConfigFile::parse_string(text);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect_line("[a]\nkey value\n", "line 2");
    expect_line("key = 1\n", "line 1: key outside any [section]");
    expect_line("[a\nk = 1\n", "line 1: unterminated");
    expect_line("[a]\nk = 1\nk = 2\n", "line 3: duplicate key 'k'");
    expect_line("[a]\n = 1\n", "line 2: empty key");
    expect_line("[]\n", "line 1: empty section");
}

TEST_CASE("type errors are reported with their location") {
    const ConfigFile cfg = ConfigFile::parse_string("[a]\nx = abc\ny = 1.5\nv = 1 2\n");
    CHECK_THROWS_WITH_AS(cfg.get_double("a", "x"),
                         doctest::Contains("not a number"), config_error);
    CHECK_THROWS_WITH_AS(cfg.get_int("a", "y"),
                         doctest::Contains("expected an integer"), config_error);
    CHECK_THROWS_WITH_AS(cfg.get_double("a", "v"),
                         doctest::Contains("single value"), config_error);
    CHECK_THROWS_WITH_AS(cfg.get_string("missing", "x"),
                         doctest::Contains("missing section"), config_error);
    CHECK_THROWS_WITH_AS(cfg.get_string("a", "zz"),
                         doctest::Contains("missing key"), config_error);
}

TEST_CASE("canonical form is sorted and stable") {
    const ConfigFile a = ConfigFile::parse_string("[b]\nz = 2\na = 1\n[a]\nk = 0\n");
    const ConfigFile b = ConfigFile::parse_string("[a]\nk = 0  # same content\n[b]\na = 1\nz = 2\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.canonical() == "[a]\nk = 0\n[b]\na = 1\nz = 2\n");
}

TEST_CASE("profile builder: quadratic and power law") {
    const ConfigFile cfg = ConfigFile::parse_string(kSweepText);
    const ConfinementProfile p = profile_from_config(cfg);
    CHECK(p.kind == ProfileKind::quadratic);
    CHECK(p.hessian(0, 0) == 1.0);
    CHECK(p.hessian(1, 1) == 2.0);
    CHECK(p.hessian(2, 2) == 3.0);
    CHECK(p.rho_max == 4.0);

    const ConfigFile full = ConfigFile::parse_string(
        "[profile]\nkind = quadratic\nhessian = 2 0.1 0 1.5 0.2 3\n");
    const ConfinementProfile pf = profile_from_config(full);
    CHECK(pf.hessian(0, 1) == 0.1);
    CHECK(pf.hessian(1, 0) == 0.1);
    CHECK(pf.hessian(1, 2) == 0.2);

    const ConfigFile pw = ConfigFile::parse_string(
        "[profile]\nkind = power_law\nrho1 = 2\nexponent = 4\ndensity = pure_local\n");
    const ConfinementProfile pp = profile_from_config(pw);
    CHECK(pp.kind == ProfileKind::power_law);
    CHECK(pp.rho1 == 2.0);
    CHECK(pp.exponent == 4.0);

    CHECK_THROWS_AS(profile_from_config(ConfigFile::parse_string("[profile]\nkind = cubic\n")),
                    config_error);
    CHECK_THROWS_AS(
        profile_from_config(ConfigFile::parse_string("[profile]\nkind = quadratic\nhessian = 1 2\n")),
        config_error);
    // indefinite hessian fails profile validation
    CHECK_THROWS_AS(
        profile_from_config(
            ConfigFile::parse_string("[profile]\nkind = quadratic\nhessian = 1 -2 3\n")),
        config_error);
}

TEST_CASE("sweep plan builder") {
    const SweepPlan plan = sweep_plan_from_config(ConfigFile::parse_string(kSweepText));
    REQUIRE(plan.eta_values.size() == 3);
    CHECK(plan.mode == DeltaMode::fixed_delta_rule);
    CHECK(plan.masses == std::vector<double>{0.01, 0.01});
    CHECK(plan.restarts == 8);
    CHECK(plan.seed == 42);
    CHECK(plan.quad_order == 16);
}

TEST_CASE("ansatz and minimize builders") {
    const char* text = R"(
[profile]
kind = quadratic
hessian = 1 1 1

[droplets]
masses = 1 2
positions = 1 0 0  -1 0 0

[ansatz]
eta = 1e-4
delta = 0.05

[minimize]
restarts = 5

[run]
seed = 9
)";
    const ConfigFile cfg = ConfigFile::parse_string(text);
    const AnsatzSpec spec = ansatz_spec_from_config(cfg);
    CHECK(spec.eta == 1e-4);
    CHECK(spec.delta == 0.05);
    REQUIRE(spec.config.positions.size() == 2);
    CHECK(spec.config.positions[1].x == -1.0);

    const MinimizeRequest req = minimize_request_from_config(cfg);
    CHECK(req.masses == std::vector<double>{1.0, 2.0});
    CHECK(req.restarts == 5);
    CHECK(req.seed == 9);

    // wrong coordinate count
    const ConfigFile bad = ConfigFile::parse_string(
        "[profile]\nkind = quadratic\n[droplets]\nmasses = 1 2\npositions = 1 0 0\n"
        "[ansatz]\neta = 1e-4\ndelta = 0.05\n");
    CHECK_THROWS_WITH_AS(ansatz_spec_from_config(bad),
                         doctest::Contains("3 coordinates per mass"), config_error);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(ConfigFile::parse_file("/nonexistent/droplab.cfg"), config_error);
}
