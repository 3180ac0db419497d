// Command-line front end: configuration-driven runs of the decay toolkit.
//
//   decaykit <command> --config run.json [--out DIR] [--format csv|json|both]
//
// Commands: spectra, selfenergy, poles, evolve, vanhove, relativistic.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "decaykit/runner.hpp"

namespace {

struct Args {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "both";
};

int dispatch(const std::string& command, const Args& args) {
  using nlohmann::json;
  decaykit::OutputSpec fmt;
  if (args.format == "csv") {
    fmt.json = false;
  } else if (args.format == "json") {
    fmt.csv = false;
  } else if (args.format != "both") {
    std::cerr << "error: ConfigError: --format must be csv|json|both\n";
    return 2;
  }

  json config;
  {
    std::ifstream in(args.config_path);
    if (!in) {
      std::cerr << "error: ConfigError: cannot open config file '" << args.config_path
                << "'\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const json::parse_error& e) {
      std::cerr << "error: ConfigError: " << e.what() << "\n";
      return 2;
    }
  }

  try {
    decaykit::RunOutcome out = decaykit::run_command(command, config, args.out_dir, fmt);
    std::cout << out.manifest.dump(2) << std::endl;
    return 0;
  } catch (const decaykit::ConfigError& e) {
    std::cerr << "error: ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const decaykit::Error& e) {
    std::cerr << "error: ComputeError: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: ComputeError: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decaykit: exact decay dynamics, second-sheet poles and the "
               "Van Hove lambda^2 t limit"};
  app.set_version_flag("--version", std::string("decaykit ") + decaykit::kArtifactVersion);
  app.require_subcommand(1);

  Args args;
  const std::vector<std::string> commands = {"spectra",  "selfenergy",   "poles",
                                             "evolve",   "vanhove",      "relativistic"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "JSON run configuration")->required();
    sub->add_option("--out", args.out_dir, "output directory (default: out)");
    sub->add_option("--format", args.format, "csv|json|both (default: both)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& name : commands)
    if (app.got_subcommand(name)) return dispatch(name, args);
  return 2;
}
