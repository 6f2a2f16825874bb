#pragma once

// Audit batteries behind the command-line subcommands, plus the probe
// builders for the transgression checks.

#include <cstdint>
#include <string>

#include "gerbelab/mickelsson.hpp"
#include "gerbelab/report.hpp"
#include "gerbelab/transgress.hpp"
#include "gerbelab/u1ext.hpp"

namespace gerbelab {

struct RunConfig {
  int grid = 256;
  double tol = 0.0;  // 0 selects each check's default
  int trials = 0;    // 0 selects each battery's default
  std::uint64_t seed = 1;
  std::string calibration_path;
  CocycleParams params{};
  std::string check;   // mickelsson / transgress check name
  std::string form = "poincare";
  std::string sphere = "equator";
  bool grid_refine = false;

  Json to_json() const;
};

// Loads a cached calibration and validates it by a spot check; recomputes
// and rewrites the cache when it is missing or fails the check. An empty
// path uses the in-process default.
Calibration load_calibration(const std::string& path);
bool calibration_spot_check(const Calibration& cal);
Json calibration_to_json(const Calibration& cal);

AuditReport audit_check_cocycle(const RunConfig& cfg);
AuditReport audit_classify(const RunConfig& cfg);
AuditReport audit_poincare(const RunConfig& cfg);
AuditReport audit_mickelsson(const RunConfig& cfg, const Calibration& cal);
AuditReport audit_wz(const RunConfig& cfg, const Calibration& cal);
AuditReport audit_transgress(const RunConfig& cfg, const Calibration& cal);
AuditReport audit_reciprocity(const RunConfig& cfg);
AuditReport audit_calibrate(const RunConfig& cfg);

// Family of path pairs with common moving endpoints and sitting instants,
// on (K+1) members of N intervals, in the base of the form.
PathPairFamily random_path_pair_family(Base base, Rng& rng, int K, int N, bool move_first = true);
// Random path in the base with sitting instants.
Carrier random_carrier_path(Base base, Rng& rng, int N);
// Random bigon in P_x X, fixed ends in t, with sitting instants in z.
Bigon random_bigon(Base base, Rng& rng, int S, int T, int N);

}  // namespace gerbelab
