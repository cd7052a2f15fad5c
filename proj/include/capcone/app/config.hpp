#pragma once

// Run configuration: flat `key = value` files with `#` comments, dotted keys
// for the competitor, and command-line overrides applied on top.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "capcone/jet.hpp"
#include "capcone/simons.hpp"

namespace capcone::app {

enum class Command { CheckSpectral, CheckJets, CheckBoundary, ScanRigidity, FullReport };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::CheckSpectral: return "check-spectral";
    case Command::CheckJets: return "check-jets";
    case Command::CheckBoundary: return "check-boundary";
    case Command::ScanRigidity: return "scan-rigidity";
    case Command::FullReport: return "full-report";
  }
  return "";
}

inline std::optional<Command> parse_command(std::string_view s) {
  for (Command c : {Command::CheckSpectral, Command::CheckJets, Command::CheckBoundary, Command::ScanRigidity,
                    Command::FullReport})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct Tolerances {
  double spectral = 1e-6;   // relative, closed form against finite differences
  double jet = 1e-12;       // constraint closure and curvature identities
  double boundary = 1e-10;  // boundary identities, relative to their scale
  double interior = 1e-12;  // interior chain, relative to the cubic scale
  double graphical = 1e-12;
};

struct RunConfig {
  Command command = Command::FullReport;
  std::size_t n = 4;
  double theta_degrees = 45.0;
  CompetitorSpec competitor = split_competitor(4.0, 1.0 / 3.0);
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string out_path;
  Tolerances tolerance;
  std::vector<std::string> notices;

  double theta() const { return theta_degrees * std::numbers::pi / 180.0; }
};

/// Malformed input; maps to exit code 2.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& key, const std::string& msg)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) +
              (key.empty() ? std::string() : ": key '" + key + "'") + ": " + msg) {}
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> to_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> to_unsigned(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<bool> to_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

}  // namespace detail

/// Assigns one key. `source` and `line` only feed diagnostics.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, const std::string& source,
                          std::size_t line) {
  const std::string k(key);
  auto fail = [&](const std::string& msg) { throw ConfigError(source, line, k, msg); };
  auto real = [&] {
    const auto v = detail::to_real(value);
    if (!v) fail("expected a finite real number, got '" + std::string(value) + "'");
    return *v;
  };
  auto count = [&] {
    const auto v = detail::to_unsigned(value);
    if (!v) fail("expected a non-negative integer, got '" + std::string(value) + "'");
    return *v;
  };

  if (key == "command") {
    const auto c = parse_command(value);
    if (!c) fail("unknown command '" + std::string(value) + "'");
    cfg.command = *c;
  } else if (key == "n") {
    cfg.n = count();
  } else if (key == "theta_degrees") {
    cfg.theta_degrees = real();
  } else if (key == "competitor.family") {
    if (value == "power") {
      cfg.competitor.family = CompetitorFamily::PowerOfNormA;
    } else if (value == "split") {
      cfg.competitor.family = CompetitorFamily::SplitQuadratic;
    } else {
      fail("expected 'power' or 'split', got '" + std::string(value) + "'");
    }
  } else if (key == "competitor.a") {
    cfg.competitor.a = real();
  } else if (key == "competitor.alpha") {
    cfg.competitor.alpha = real();
  } else if (key == "competitor.epsilon") {
    cfg.competitor.epsilon = real();
  } else if (key == "samples") {
    cfg.samples = count();
  } else if (key == "seed") {
    cfg.seed = count();
  } else if (key == "exact") {
    const auto b = detail::to_bool(value);
    if (!b) fail("expected true or false, got '" + std::string(value) + "'");
    cfg.exact = *b;
  } else if (key == "out_path") {
    cfg.out_path = std::string(value);
  } else if (key == "tolerance.spectral") {
    cfg.tolerance.spectral = real();
  } else if (key == "tolerance.jet") {
    cfg.tolerance.jet = real();
  } else if (key == "tolerance.boundary") {
    cfg.tolerance.boundary = real();
  } else if (key == "tolerance.interior") {
    cfg.tolerance.interior = real();
  } else if (key == "tolerance.graphical") {
    cfg.tolerance.graphical = real();
  } else {
    fail("unknown key");
  }
}

inline RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>") {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, "", "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, line_no, "", "missing key");
    if (value.empty()) throw ConfigError(source, line_no, std::string(key), "missing value");
    apply_setting(cfg, key, value, source, line_no);
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "", "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Range checks and the obtuse-angle reflection. Appends notices.
inline void validate(RunConfig& cfg, const std::string& source = "<config>") {
  if (cfg.n < 2 || cfg.n > 12) throw ConfigError(source, 0, "n", "must lie in [2, 12]");
  if (cfg.samples < 1) throw ConfigError(source, 0, "samples", "must be >= 1");
  const auto norm = normalize_contact_angle(cfg.theta_degrees * std::numbers::pi / 180.0);
  if (!(cfg.theta_degrees > 0.0 && cfg.theta_degrees < 180.0) || cfg.theta_degrees == 90.0 || !norm)
    throw ConfigError(source, 0, "theta_degrees", "must lie in (0, 180) and differ from 90");
  if (cfg.theta_degrees > 90.0) {
    const double mapped = 180.0 - cfg.theta_degrees;
    std::ostringstream os;
    os.precision(17);
    os << "theta_degrees " << cfg.theta_degrees << " reflected to " << mapped;
    cfg.notices.push_back(os.str());
    cfg.theta_degrees = mapped;
  }
  if (!(cfg.competitor.a > 0.0)) throw ConfigError(source, 0, "competitor.a", "must be > 0");
  if (!(cfg.competitor.alpha > 0.0 && cfg.competitor.alpha < 1.0))
    throw ConfigError(source, 0, "competitor.alpha", "must lie in (0, 1)");
  if (!(cfg.competitor.epsilon >= 0.0)) throw ConfigError(source, 0, "competitor.epsilon", "must be >= 0");
  if (cfg.competitor.family == CompetitorFamily::PowerOfNormA) cfg.competitor.a = 1.0;
  const Tolerances& t = cfg.tolerance;
  for (const auto& [name, v] : {std::pair{"tolerance.spectral", t.spectral}, std::pair{"tolerance.jet", t.jet},
                                std::pair{"tolerance.boundary", t.boundary}, std::pair{"tolerance.interior", t.interior},
                                std::pair{"tolerance.graphical", t.graphical}})
    if (!(v > 0.0)) throw ConfigError(source, 0, name, "must be > 0");
}

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// The configuration as a config file that reproduces the run.
inline std::string echo(const RunConfig& cfg) {
  std::ostringstream os;
  os << "command = " << to_string(cfg.command) << '\n'
     << "n = " << cfg.n << '\n'
     << "theta_degrees = " << format_real(cfg.theta_degrees) << '\n'
     << "competitor.family = " << (cfg.competitor.family == CompetitorFamily::PowerOfNormA ? "power" : "split") << '\n'
     << "competitor.a = " << format_real(cfg.competitor.a) << '\n'
     << "competitor.alpha = " << format_real(cfg.competitor.alpha) << '\n'
     << "competitor.epsilon = " << format_real(cfg.competitor.epsilon) << '\n'
     << "samples = " << cfg.samples << '\n'
     << "seed = " << cfg.seed << '\n'
     << "exact = " << (cfg.exact ? "true" : "false") << '\n'
     << "tolerance.spectral = " << format_real(cfg.tolerance.spectral) << '\n'
     << "tolerance.jet = " << format_real(cfg.tolerance.jet) << '\n'
     << "tolerance.boundary = " << format_real(cfg.tolerance.boundary) << '\n'
     << "tolerance.interior = " << format_real(cfg.tolerance.interior) << '\n'
     << "tolerance.graphical = " << format_real(cfg.tolerance.graphical) << '\n';
  return os.str();
}

}  // namespace capcone::app
