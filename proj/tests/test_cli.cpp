#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "decaykit/runner.hpp"

using namespace decaykit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("decaykit_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json flat_evolve_config() {
  return json{{"model", {{"family", "flat"}, {"gamma", 1.0}, {"Lambda", 10.0}}},
              {"E_a", 1.0},
              {"lambda", 0.1},
              {"grid", {{"t_min", 0.1}, {"t_max", 300.0}, {"nodes", 40}, {"spacing", "mixed"}}},
              {"method", "decomposed"}};
}

}  // namespace

TEST_CASE("evolve run produces the documented CSV header and outputs") {
  fs::path out = temp_dir("evolve");
  RunOutcome r = run_command("evolve", flat_evolve_config(), out);
  REQUIRE(r.all_checks_passed);
  const std::string csv = slurp(out / "series_decomposed.csv");
  REQUIRE(csv.rfind("t,re_A,im_A,P,re_pole,im_pole,re_cut,im_cut\n", 0) == 0);
  // first data row is t = 0 with A within 1e-6 of unity
  std::istringstream rows(csv);
  std::string header, first;
  std::getline(rows, header);
  std::getline(rows, first);
  double t, re, im;
  char c;
  std::istringstream(first) >> t >> c >> re >> c >> im;
  REQUIRE(t == 0.0);
  REQUIRE(re == Catch::Approx(1.0).margin(1e-6));
  REQUIRE(im == Catch::Approx(0.0).margin(1e-6));
  REQUIRE(fs::exists(out / "evolve.json"));
  REQUIRE(fs::exists(out / "manifest.json"));
}

TEST_CASE("config validation failures carry field diagnostics") {
  fs::path out = temp_dir("badcfg");
  json c = flat_evolve_config();
  c["model"].erase("Lambda");
  REQUIRE_THROWS_AS(run_command("evolve", c, out), ConfigError);

  json bad_family = flat_evolve_config();
  bad_family["model"]["family"] = "nosuch";
  REQUIRE_THROWS_AS(run_command("evolve", bad_family, out), ConfigError);

  json bad_method = flat_evolve_config();
  bad_method["method"] = "magic";
  REQUIRE_THROWS_AS(run_command("evolve", bad_method, out), ConfigError);

  REQUIRE_THROWS_AS(run_command("nosuchcommand", flat_evolve_config(), out), ConfigError);
}

TEST_CASE("closed relativistic channel is rejected at configuration time") {
  fs::path out = temp_dir("closed");
  json c{{"relativistic",
          {{"mu", 1.0}, {"m", 0.6}, {"M", 1.0}, {"lambda", 0.1}}}};
  try {
    run_command("relativistic", c, out);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(std::string(e.what()).find("closed channel") != std::string::npos);
  }
}

TEST_CASE("identical configurations produce byte-identical outputs") {
  json cfgs[] = {flat_evolve_config(),
                 json{{"model", {{"family", "powerlaw"}, {"g2", 1.0}, {"eta", 0.5}, {"Lambda", 1.0}}},
                      {"E_a", 1.0},
                      {"lambda", 0.1}}};
  const std::string cmds[] = {"evolve", "poles"};
  for (int k = 0; k < 2; ++k) {
    fs::path a = temp_dir("det_a" + std::to_string(k));
    fs::path b = temp_dir("det_b" + std::to_string(k));
    RunOutcome ra = run_command(cmds[k], cfgs[k], a);
    RunOutcome rb = run_command(cmds[k], cfgs[k], b);
    REQUIRE(ra.outputs == rb.outputs);
    for (const std::string& name : ra.outputs)
      REQUIRE(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("poles run reports location, residue and diagnostics") {
  fs::path out = temp_dir("poles");
  json c{{"model", {{"family", "flat"}, {"gamma", 1.0}, {"Lambda", 10.0}}},
         {"E_a", 1.0},
         {"lambda", 0.1}};
  RunOutcome r = run_command("poles", c, out);
  REQUIRE(r.all_checks_passed);
  const json res = json::parse(slurp(out / "poles.json"));
  REQUIRE(res.at("poles").size() == 1);
  const json& p = res.at("poles")[0];
  REQUIRE(p.at("location_im").get<double>() < 0.0);
  REQUIRE(p.contains("residue_re"));
  REQUIRE(p.at("iterations").get<int>() <= 50);
}

TEST_CASE("vanhove run emits strictly decreasing deviations") {
  fs::path out = temp_dir("vanhove");
  json c{{"model", {{"family", "flat"}, {"gamma", 1.0}, {"Lambda", 10.0}}},
         {"E_a", 1.0},
         {"lambdas", {0.4, 0.2, 0.1}},
         {"window", {{"t_lo", 0.1}, {"t_hi", 5.0}, {"nodes", 61}}}};
  RunOutcome r = run_command("vanhove", c, out);
  REQUIRE(r.all_checks_passed);
  const json res = json::parse(slurp(out / "vanhove.json"));
  auto dev = res.at("deviation_max").get<std::vector<double>>();
  REQUIRE(dev.size() == 3);
  REQUIRE(dev[0] > dev[1]);
  REQUIRE(dev[1] > dev[2]);
  REQUIRE(fs::exists(out / "series_lambda_0.4.csv"));
  REQUIRE(fs::exists(out / "series_lambda_0.05.csv") == false);
}

TEST_CASE("spectra and selfenergy runs pass their internal checks") {
  {
    fs::path out = temp_dir("spectra");
    json c{{"model", {{"family", "powerlaw"}, {"g2", 1.0}, {"eta", 0.5}, {"Lambda", 1.0}}}};
    RunOutcome r = run_command("spectra", c, out);
    REQUIRE(r.all_checks_passed);
    const json res = json::parse(slurp(out / "spectra.json"));
    REQUIRE(res.at("total_weight").get<double>() ==
            Catch::Approx(std::tgamma(0.5)).epsilon(1e-12));
  }
  {
    fs::path out = temp_dir("selfenergy");
    json c{{"model", {{"family", "flat"}, {"gamma", 1.0}, {"Lambda", 10.0}}},
           {"E_points", {1.0, 5.0, 9.0}}};
    RunOutcome r = run_command("selfenergy", c, out);
    REQUIRE(r.all_checks_passed);
    const std::string csv = slurp(out / "selfenergy.csv");
    REQUIRE(csv.rfind("E,delta,gamma\n", 0) == 0);
  }
}

TEST_CASE("json output format can be selected alone") {
  fs::path out = temp_dir("fmt");
  OutputSpec fmt;
  fmt.csv = false;
  RunOutcome r = run_command("evolve", flat_evolve_config(), out, fmt);
  REQUIRE_FALSE(fs::exists(out / "series_decomposed.csv"));
  REQUIRE(fs::exists(out / "evolve.json"));
  (void)r;
}
