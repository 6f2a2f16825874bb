#pragma once

// Machine-readable audit reports.

#include <optional>
#include <string>
#include <vector>

#include "gerbelab/io.hpp"

namespace gerbelab {

inline constexpr const char* kToolVersion = "gerbelab 1.0.0";

struct Check {
  std::string name;
  double defect_modulus = 0.0;
  double defect_phase_turns = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string paper_ref;
};

struct AuditReport {
  std::string tool_version = kToolVersion;
  Json config = Json::object();
  std::vector<Check> checks;
  std::optional<Json> verdict;  // classify only
  std::optional<Json> result;   // subcommand-specific values

  // pass is defect_modulus <= tolerance.
  void add(std::string name, double modulus, double phase_turns, double tolerance, std::string ref);
  bool all_pass() const;
  Json to_json() const;
  std::string dump() const;  // stable formatting, trailing newline
};

}  // namespace gerbelab
