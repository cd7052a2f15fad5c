#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "capcone/app/suites.hpp"

namespace {

using capcone::app::ConfigError;
using capcone::app::RunConfig;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> seed, samples, n, theta, alpha, a, out;
  bool exact = false;
};

RunConfig load(const std::optional<std::string>& command, const Overrides& o) {
  RunConfig cfg = o.config ? capcone::app::parse_config_file(*o.config) : RunConfig{};
  if (command) {
    const auto cmd = capcone::app::parse_command(*command);
    if (!cmd) throw ConfigError("<command line>", 0, "", "unknown command '" + *command + "'");
    cfg.command = *cmd;
  }
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) capcone::app::apply_setting(cfg, key, *v, "<command line>", 0);
  };
  set("seed", o.seed);
  set("samples", o.samples);
  set("n", o.n);
  set("theta_degrees", o.theta);
  set("competitor.alpha", o.alpha);
  set("competitor.a", o.a);
  set("out_path", o.out);
  if (o.exact) cfg.exact = true;
  capcone::app::validate(cfg, o.config.value_or("<command line>"));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of stability and rigidity estimates for minimal capillary cones"};
  app.set_version_flag("--version", capcone::app::kVersion);
  std::optional<std::string> command;
  Overrides o;
  app.add_option("command", command, "check-spectral | check-jets | check-boundary | scan-rigidity | full-report "
                 "(default: the config's command, else full-report)");
  app.add_option("--config", o.config, "Config file of key = value lines");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--samples", o.samples, "Samples per randomized check");
  app.add_option("--n", o.n, "Dimension");
  app.add_option("--theta", o.theta, "Contact angle in degrees");
  app.add_option("--alpha", o.alpha, "Competitor exponent");
  app.add_option("--a", o.a, "Split-quadratic weight");
  app.add_option("--out", o.out, "Report destination (default: standard output)");
  app.add_flag("--exact", o.exact, "Add rational-arithmetic checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load(command, o);
    const auto report = capcone::app::run(cfg);
    const std::string text = capcone::app::render(report);
    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out_path);
      if (!out || !(out << text)) {
        std::cerr << "error: cannot write " << cfg.out_path << '\n';
        return 2;
      }
    }
    return report.passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const capcone::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
