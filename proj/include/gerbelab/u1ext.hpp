#pragma once

// Central extensions of LU(1) given by the three-parameter cocycle family
//   eta(f1, f2) = exp 2 pi i ( alpha * int f1 f2' + beta (n1 avg f2 + n2 avg f1)
//                              + gamma * n1 f2(0) ),
// the Poincare-bundle holonomy cocycle, and the audits built on them.

#include <string>
#include <vector>

#include "gerbelab/loopcore.hpp"

namespace gerbelab {

enum class Family { R, Z, Generic };

struct CocycleParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  Family family = Family::Generic;

  // Validates the family constraints: R needs beta = -gamma and alpha = gamma,
  // Z needs integer parameters.
  static CocycleParams make(double alpha, double beta, double gamma, Family family);
};

std::string family_name(Family f);
Family parse_family(const std::string& s);

struct U1ExtElement {
  Complex z{1.0, 0.0};
  LoopU1 tau;
};

// int_0^1 f1 f2' for arbitrary (not necessarily canonical) lifts. The
// winding ramps are integrated in closed form; the periodic remainder uses
// the trapezoid rule with a spectral derivative.
double lift_pairing(const RealLift& f1, const RealLift& f2);

// The exponent of eta in turns, evaluated on the lifts exactly as given.
double eta_exponent(const CocycleParams& p, const RealLift& f1, const RealLift& f2);

Complex eta(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2);
U1ExtElement extension_multiply(const CocycleParams& p, const U1ExtElement& a, const U1ExtElement& b);
Complex cocycle_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2, const LoopU1& t3);
// Same identity but with every product re-gauged to f(0) in [0,1), as
// extension_multiply does. Equals 1 on the R and Z families only.
Complex regauged_cocycle_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2, const LoopU1& t3);
// eta on lifts shifted by the integers z1, z2, relative to the canonical value.
Complex shift_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2, int z1, int z2);

struct SymmetryCheck {
  Complex measured;
  Complex predicted;
};
SymmetryCheck symmetry_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2);

// Two loops with winding -1 supported on the two half circles. The loops are
// returned in canonical gauge; the lifts normalised to f(0) = 1 are kept as
// well because that is the form in which the pair is usually written down.
struct DisjointPair {
  LoopU1 tau1;
  LoopU1 tau2;
  RealLift unit_start_f1;
  RealLift unit_start_f2;
};
DisjointPair disjoint_pair(const SmoothingMap& phi);
Complex disjoint_comm_defect(const CocycleParams& p, const SmoothingMap& phi);
Complex disjoint_comm_defect(const CocycleParams& p);

Complex poincare_holonomy(const LoopU1& t1, const LoopU1& t2);

struct Classification {
  bool well_defined = false;
  double worst_shift_defect = 0.0;
  bool disjoint_commutative = false;
  Complex disjoint_defect;
  bool transgressivity_obstructed = false;
  std::string known_identity;  // empty when none applies
};
Classification classify(const CocycleParams& p, int grid = 256, std::uint64_t seed = 1, int probes = 4,
                        double tol = 1e-6);

}  // namespace gerbelab
