#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mml/lab.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mml_lab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double number(const mml::Cell& c) { return std::get<double>(c); }

}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("names round trip") {
    for (auto c : {mml::Command::levinson, mml::Command::jt_check, mml::Command::chain, mml::Command::meanvalue,
                   mml::Command::zeros, mml::Command::gsupport}) {
      CHECK(mml::parse_command(mml::command_name(c)) == c);
    }
    CHECK(mml::parse_window("dyadic") == mml::Window::dyadic);
    CHECK(mml::parse_format("json") == mml::OutputFormat::json);
    CHECK_THROWS_AS(mml::parse_command("plot"), mml::ConfigError);
    CHECK_THROWS_AS(mml::parse_window("sliding"), mml::ConfigError);
    CHECK_THROWS_AS(mml::parse_format("xml"), mml::ConfigError);
  }

  TEST_CASE("config file") {
    const auto dir = scratch("config");
    {
      std::ofstream out(dir / "run.ini");
      out << "[lab]\ncommand = chain\nx_list = 10, 100\nT_list = 150\nwindow = dyadic\nseed = 9\n"
             "[moments]\nrel_tol = 1e-7\nworkers = 2\n"
             "[kernels]\nspacing = 0.04\n";
    }
    const auto cfg = mml::load_config_file(dir / "run.ini");
    CHECK(cfg.command == mml::Command::chain);
    CHECK(cfg.x_list == std::vector<double>{10.0, 100.0});
    CHECK(cfg.T_list == std::vector<double>{150.0});
    CHECK(cfg.window == mml::Window::dyadic);
    CHECK(cfg.seed == 9);
    CHECK(cfg.quadrature.rel_tol == 1e-7);
    CHECK(cfg.quadrature.workers == 2);
    CHECK(cfg.contour.spacing == 0.04);
    CHECK_NOTHROW(cfg.validate());

    {
      std::ofstream out(dir / "bad.ini");
      out << "[lab]\nthetas = 0.5\n";
    }
    CHECK_THROWS_AS(mml::load_config_file(dir / "bad.ini"), mml::ConfigError);
    {
      std::ofstream out(dir / "bad2.ini");
      out << "[moments]\nrel_tol = tiny\n";
    }
    CHECK_THROWS_AS(mml::load_config_file(dir / "bad2.ini"), mml::ConfigError);
    CHECK_THROWS_AS(mml::load_config_file(dir / "missing.ini"), mml::ConfigError);
    fs::remove_all(dir);
  }

  TEST_CASE("validation") {
    mml::ExperimentConfig cfg;
    cfg.theta_list = {1.5};
    CHECK_THROWS_AS(cfg.validate(), mml::ConfigError);
    cfg = {};
    cfg.x_list = {1.5};
    CHECK_THROWS_AS(cfg.validate(), mml::ConfigError);
    cfg = {};
    cfg.beta0 = 1.0;
    CHECK_THROWS_AS(cfg.validate(), mml::ConfigError);
  }

  TEST_CASE("guardrail") {
    CHECK_THROWS_AS(mml::check_guardrail(2e4, 10.0, false), mml::GuardrailError);
    CHECK_THROWS_AS(mml::check_guardrail(100.0, 2e6, false), mml::GuardrailError);
    CHECK_NOTHROW(mml::check_guardrail(2e4, 2e6, true));
    CHECK_NOTHROW(mml::check_guardrail(1e4, 1e6, false));
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::meanvalue;
    cfg.T_list = {20000.0};
    CHECK_THROWS_AS(mml::run(cfg), mml::GuardrailError);
  }

  TEST_CASE("CSV layout") {
    mml::ResultTable table;
    table.command = "demo";
    table.columns = {"a", "z", "name", "ok", "n"};
    table.rows.push_back({1.0 / 3.0, mml::Complex(0.5, -2.0), std::string("x"), true, std::int64_t{7}});
    table.summary.push_back({"worst", 0.25});
    std::ostringstream out;
    mml::write_csv(out, table);
    CHECK(out.str() ==
          "# mml-schema 1\n# worst = 0.25\na,z_re,z_im,name,ok,n\n0.333333333333333,0.5,-2,x,true,7\n");
  }

  TEST_CASE("JSON layout") {
    mml::ResultTable table;
    table.command = "demo";
    table.columns = {"a", "z"};
    table.rows.push_back({2.5, mml::Complex(1.0, 2.0)});
    table.summary.push_back({"max", 1.0});
    std::ostringstream out;
    mml::write_json(out, table, mml::ExperimentConfig{});
    const auto doc = nlohmann::json::parse(out.str());
    CHECK(doc["schema"] == 1);
    CHECK(doc["version"] == mml::kVersion);
    CHECK(doc["command"] == "demo");
    CHECK(doc["config"].contains("quadrature"));
    CHECK(doc["summary"]["max"] == 1.0);
    CHECK(doc["rows"][0]["a"] == 2.5);
    CHECK(doc["rows"][0]["z"]["im"] == 2.0);
  }

  TEST_CASE("emit to a file creates directories") {
    const auto dir = scratch("emit");
    mml::ExperimentConfig cfg;
    cfg.output = dir / "nested" / "out.csv";
    mml::ResultTable table;
    table.command = "demo";
    table.columns = {"a"};
    table.rows.push_back({1.0});
    mml::emit(table, cfg);
    std::ifstream in(cfg.output);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# mml-schema 1");
    fs::remove_all(dir);
  }

  TEST_CASE("zeros writes the zeta-grid cache") {
    const auto dir = scratch("zeros");
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::zeros;
    cfg.zero_count = 2;
    cfg.cache_dir = dir;
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 2);
    CHECK(std::abs(number(table.rows[0][1]) - 14.1347251417) < 1e-8);
    CHECK(std::abs(number(table.rows[1][1]) - 21.0220396388) < 1e-8);
    std::ifstream grid(dir / "zeta_grid.csv");
    std::string line;
    std::getline(grid, line);
    CHECK(line == "# mml-schema 1");
    std::getline(grid, line);
    CHECK(line == "t,re,im,method,err");
    fs::remove_all(dir);
  }

  TEST_CASE("gsupport") {
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::gsupport;
    cfg.t_list = {0.0};
    cfg.u_list = {0.5, 2.0};
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 2);
    CHECK(number(table.rows[0][2]) <= number(table.rows[0][4]));
    CHECK(number(table.rows[1][2]) < 1e-8);
  }

  TEST_CASE("jt-check at the smallest admissible point") {
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::jt_check;
    cfg.x_list = {2.0};
    cfg.t_list = {0.0};
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 1);
    for (int c : {3, 4, 5}) CHECK(mml::is_finite(std::get<mml::Complex>(table.rows[0][c])));
    CHECK(number(table.summary[0].second) < 1e-4);
  }

  TEST_CASE("chain") {
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::chain;
    cfg.x_list = {100.0};
    cfg.T_list = {200.0};
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 1);
    const double x = 100.0;
    const double lhs = number(table.rows[0][4]);
    CHECK(lhs == doctest::Approx(x * std::log(2.0) + 200.0 * std::log(202.0) / x).epsilon(1e-14));
    const double ratio = number(table.rows[0][6]);
    CHECK(std::isfinite(ratio));
    CHECK(ratio < 100.0);

    cfg.beta0 = 0.75;
    CHECK_THROWS_AS(mml::run(cfg), mml::DomainError);
  }

  TEST_CASE("dyadic window is consistent with from_zero") {
    const auto mobius = mml::mobius_sieve(100);
    const auto whole = mml::chain_report(30.0, 0.0, 200.0, mobius, {});
    const auto low = mml::chain_report(30.0, 0.0, 100.0, mobius, {});
    const auto high = mml::chain_report(30.0, 100.0, 200.0, mobius, {});
    const double err = whole.average.err_estimate + low.average.err_estimate + high.average.err_estimate;
    CHECK(std::abs(whole.average.value - low.average.value - high.average.value) <
          3.0 * err + 1e-9 * whole.average.value);
  }

  TEST_CASE("levinson with a degenerate length") {
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::levinson;
    cfg.theta_list = {0.5};
    cfg.T_list = {3.0};
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 1);
    CHECK(number(table.rows[0][2]) < 2.0);
    CHECK(number(table.rows[0][4]) > 0.0);
    CHECK(std::isfinite(number(table.rows[0][4])));
  }

  TEST_CASE("levinson with length samples") {
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::levinson;
    cfg.theta_list = {0.5};
    cfg.T_list = {400.0};
    cfg.length_samples = 3;
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 3);
    CHECK(number(table.rows[0][2]) == doctest::Approx(2.0));
    CHECK(number(table.rows[2][2]) == doctest::Approx(20.0));
    CHECK(number(table.rows[2][5]) == doctest::Approx(3.0));
  }

  TEST_CASE("meanvalue") {
    mml::ExperimentConfig cfg;
    cfg.command = mml::Command::meanvalue;
    cfg.T_list = {10.0, 500.0};
    const auto table = mml::run(cfg);
    REQUIRE(table.rows.size() == 2);
    CHECK(number(table.rows[0][2]) > 0.0);
    CHECK(number(table.rows[1][4]) >= 0.5);
  }
}
