#include "gerbelab/report.hpp"

#include <cmath>

namespace gerbelab {

void AuditReport::add(std::string name, double modulus, double phase_turns, double tolerance, std::string ref) {
  const bool pass = std::isfinite(modulus) && modulus <= tolerance;
  checks.push_back(Check{std::move(name), modulus, phase_turns, tolerance, pass, std::move(ref)});
}

bool AuditReport::all_pass() const {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

Json AuditReport::to_json() const {
  Json j;
  j["tool_version"] = tool_version;
  j["config"] = config;
  Json arr = Json::array();
  for (const Check& c : checks)
    arr.push_back(Json{{"name", c.name},
                       {"defect_modulus", c.defect_modulus},
                       {"defect_phase_turns", c.defect_phase_turns},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass},
                       {"paper_ref", c.paper_ref}});
  j["checks"] = arr;
  if (verdict) j["verdict"] = *verdict;
  if (result) j["result"] = *result;
  return j;
}

std::string AuditReport::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace gerbelab
