#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "capcone/app/config.hpp"

namespace capcone::app {

inline constexpr const char* kVersion = "capcone 1.0.0";

enum class Status { Pass, Fail, Documented };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Documented: return "documented";
  }
  return "";
}

/// One machine-readable record.
struct CheckRecord {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  Status status = Status::Pass;
};

/// |lhs - rhs| <= tolerance.
inline CheckRecord equality_record(std::string id, double lhs, double rhs, double tolerance) {
  const double gap = lhs - rhs;
  return {std::move(id), lhs, rhs, gap, tolerance, std::abs(gap) <= tolerance ? Status::Pass : Status::Fail};
}

/// lhs - rhs >= -tolerance.
inline CheckRecord inequality_record(std::string id, double lhs, double rhs, double tolerance) {
  const double gap = lhs - rhs;
  return {std::move(id), lhs, rhs, gap, tolerance, gap >= -tolerance ? Status::Pass : Status::Fail};
}

/// A residual that must stay below a bound; recorded as bound >= residual.
inline CheckRecord residual_record(std::string id, double residual, double bound) {
  return {std::move(id), residual, 0.0, residual, bound, residual <= bound ? Status::Pass : Status::Fail};
}

struct SuiteResult {
  std::string name;
  std::vector<CheckRecord> records;
  std::vector<std::string> notes;  // human-readable lines
  double seconds = 0.0;

  bool passed() const {
    for (const auto& r : records)
      if (r.status == Status::Fail) return false;
    return true;
  }
};

struct Report {
  RunConfig config;
  std::vector<SuiteResult> suites;

  bool passed() const {
    for (const auto& s : suites)
      if (!s.passed()) return false;
    return true;
  }
};

inline std::string machine_block(const Report& r) {
  std::ostringstream os;
  os << "# begin machine block\n";
  for (const auto& s : r.suites)
    for (const auto& c : s.records)
      os << "id=" << c.id << " lhs=" << format_real(c.lhs) << " rhs=" << format_real(c.rhs)
         << " gap=" << format_real(c.gap) << " tolerance=" << format_real(c.tolerance)
         << " status=" << to_string(c.status) << '\n';
  os << "# end machine block\n";
  return os.str();
}

inline std::string render(const Report& r) {
  std::ostringstream os;
  os << "== " << kVersion << " report ==\n\n[config]\n" << echo(r.config);
  for (const auto& n : r.config.notices) os << "notice: " << n << '\n';
  os << '\n';
  for (const auto& s : r.suites) {
    std::size_t pass = 0, fail = 0, doc = 0;
    for (const auto& c : s.records) {
      if (c.status == Status::Pass) ++pass;
      if (c.status == Status::Fail) ++fail;
      if (c.status == Status::Documented) ++doc;
    }
    char line[160];
    std::snprintf(line, sizeof line, "[%s] %s: %zu pass, %zu fail, %zu documented (%.3f s)\n",
                  s.passed() ? "PASS" : "FAIL", s.name.c_str(), pass, fail, doc, s.seconds);
    os << line;
    for (const auto& n : s.notes) os << "  " << n << '\n';
    for (const auto& c : s.records)
      if (c.status == Status::Fail)
        os << "  failed " << c.id << ": gap " << format_real(c.gap) << " tolerance " << format_real(c.tolerance)
           << '\n';
  }
  os << "\noverall: " << (r.passed() ? "PASS" : "FAIL") << "\n\n" << machine_block(r);
  return os.str();
}

}  // namespace capcone::app
