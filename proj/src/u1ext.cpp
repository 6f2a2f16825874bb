#include "gerbelab/u1ext.hpp"

#include <cmath>

#include "gerbelab/errors.hpp"
#include "gerbelab/probes.hpp"

namespace gerbelab {

namespace {
bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }
}  // namespace

CocycleParams CocycleParams::make(double alpha, double beta, double gamma, Family family) {
  if (family == Family::R && (std::abs(beta + gamma) > 1e-12 || std::abs(alpha - gamma) > 1e-12))
    throw InvalidArgument("R family requires beta = -gamma and alpha = gamma");
  if (family == Family::Z && !(is_integer(alpha) && is_integer(beta) && is_integer(gamma)))
    throw InvalidArgument("Z family requires integer parameters");
  return CocycleParams{alpha, beta, gamma, family};
}

std::string family_name(Family f) {
  switch (f) {
    case Family::R: return "R";
    case Family::Z: return "Z";
    default: return "generic";
  }
}

Family parse_family(const std::string& s) {
  if (s == "R" || s == "r") return Family::R;
  if (s == "Z" || s == "z") return Family::Z;
  if (s == "generic" || s == "GENERIC") return Family::Generic;
  throw InvalidArgument("unknown family '" + s + "'");
}

double lift_pairing(const RealLift& f1, const RealLift& f2) {
  if (f1.intervals() != f2.intervals()) throw GridMismatch("lifts on different grids");
  const int n = f1.intervals();
  const std::vector<double> p1 = f1.periodic_part();
  const std::vector<double> p2 = f2.periodic_part();
  const std::vector<double> dp2 = spectral_derivative(p2);
  double mean1 = 0.0, mean2 = 0.0, cross = 0.0;
  for (int j = 0; j < n; ++j) {
    mean1 += p1[j];
    mean2 += p2[j];
    cross += p1[j] * dp2[j];
  }
  mean1 /= n;
  mean2 /= n;
  cross /= n;
  const double n1 = f1.winding, n2 = f2.winding;
  return 0.5 * n1 * n2 + n1 * (p2[0] - mean2) + n2 * mean1 + cross;
}

double eta_exponent(const CocycleParams& p, const RealLift& f1, const RealLift& f2) {
  const double n1 = f1.winding, n2 = f2.winding;
  double e = 0.0;
  if (p.alpha != 0.0) e += p.alpha * lift_pairing(f1, f2);
  if (p.beta != 0.0) e += p.beta * (n1 * average_lift(f2) + n2 * average_lift(f1));
  e += p.gamma * n1 * f2.values[0];
  return e;
}

Complex eta(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2) {
  return phase(eta_exponent(p, t1.lift, t2.lift));
}

U1ExtElement extension_multiply(const CocycleParams& p, const U1ExtElement& a, const U1ExtElement& b) {
  return U1ExtElement{a.z * b.z * eta(p, a.tau, b.tau), loop_multiply(a.tau, b.tau)};
}

namespace {
RealLift lift_sum(const RealLift& a, const RealLift& b) {
  std::vector<double> v(a.values.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values[j] + b.values[j];
  return RealLift::make(std::move(v), false);
}
}  // namespace

// Products are lifted by the plain sum of the factor lifts. Re-gauging them
// would add exp 2 pi i (k n (alpha + beta)) type terms that only vanish on
// the R and Z families; see regauged_cocycle_defect.
Complex cocycle_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2, const LoopU1& t3) {
  const double lhs = eta_exponent(p, lift_sum(t1.lift, t2.lift), t3.lift) + eta_exponent(p, t1.lift, t2.lift);
  const double rhs = eta_exponent(p, t1.lift, lift_sum(t2.lift, t3.lift)) + eta_exponent(p, t2.lift, t3.lift);
  return phase(lhs - rhs);
}

Complex regauged_cocycle_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2, const LoopU1& t3) {
  const double lhs = eta_exponent(p, loop_multiply(t1, t2).lift, t3.lift) + eta_exponent(p, t1.lift, t2.lift);
  const double rhs = eta_exponent(p, t1.lift, loop_multiply(t2, t3).lift) + eta_exponent(p, t2.lift, t3.lift);
  return phase(lhs - rhs);
}

Complex shift_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2, int z1, int z2) {
  if (z1 == 0 && z2 == 0) return {1.0, 0.0};
  auto shifted = [](const RealLift& f, int z) {
    std::vector<double> v = f.values;
    for (double& x : v) x += z;
    return RealLift::make(std::move(v), false);
  };
  return phase(eta_exponent(p, shifted(t1.lift, z1), shifted(t2.lift, z2)) -
               eta_exponent(p, t1.lift, t2.lift));
}

SymmetryCheck symmetry_defect(const CocycleParams& p, const LoopU1& t1, const LoopU1& t2) {
  const double n1 = t1.lift.winding, n2 = t2.lift.winding;
  const double f10 = t1.lift.values[0], f20 = t2.lift.values[0];
  const double measured = eta_exponent(p, t1.lift, t2.lift) - eta_exponent(p, t2.lift, t1.lift);
  const double predicted = 2.0 * p.alpha * lift_pairing(t1.lift, t2.lift) - p.alpha * n1 * n2 +
                           (p.gamma - p.alpha) * n1 * f20 - (p.gamma + p.alpha) * n2 * f10;
  return {phase(measured), phase(predicted)};
}

DisjointPair disjoint_pair(const SmoothingMap& phi) {
  const int n = phi.intervals();
  if (n % 2 != 0) throw InvalidArgument("disjoint pair needs an even grid");
  const int half = n / 2;
  // f1 descends from 0 to -1 on the first half circle, f2 on the second.
  std::vector<double> f1(n + 1), f2(n + 1);
  for (int j = 0; j <= n; ++j) {
    if (j <= half) {
      f1[j] = -phi.values[2 * j];
      f2[j] = 0.0;
    } else {
      f1[j] = -1.0;
      f2[j] = -phi.values[2 * j - n];
    }
  }
  std::vector<double> u1 = f1, u2 = f2;
  for (double& x : u1) x += 1.0;
  for (double& x : u2) x += 1.0;
  return DisjointPair{LoopU1{RealLift::make(f1)}, LoopU1{RealLift::make(f2)}, RealLift::make(u1, false),
                      RealLift::make(u2, false)};
}

Complex disjoint_comm_defect(const CocycleParams& p, const SmoothingMap& phi) {
  const DisjointPair d = disjoint_pair(phi);
  return phase(eta_exponent(p, d.tau1.lift, d.tau2.lift) - eta_exponent(p, d.tau2.lift, d.tau1.lift));
}

Complex disjoint_comm_defect(const CocycleParams& p) {
  return disjoint_comm_defect(p, SmoothingMap::standard(256, 1.0 / 16.0));
}

Complex poincare_holonomy(const LoopU1& t1, const LoopU1& t2) {
  return phase(t1.lift.winding * t2.lift.values[0] - lift_pairing(t1.lift, t2.lift));
}

Classification classify(const CocycleParams& p, int grid, std::uint64_t seed, int probes, double tol) {
  Classification c;
  Rng rng(seed);
  for (int k = 0; k < probes; ++k) {
    const LoopU1 a = random_loop_u1(rng, grid, rng.integer(-2, 2));
    const LoopU1 b = random_loop_u1(rng, grid, rng.integer(-2, 2));
    for (int z1 = -2; z1 <= 2; ++z1)
      for (int z2 = -2; z2 <= 2; ++z2)
        c.worst_shift_defect = std::max(c.worst_shift_defect, std::abs(shift_defect(p, a, b, z1, z2) - 1.0));
  }
  c.well_defined = c.worst_shift_defect < tol;
  c.disjoint_defect = disjoint_comm_defect(p, SmoothingMap::standard(grid, 1.0 / 16.0));
  c.disjoint_commutative = std::abs(c.disjoint_defect - 1.0) < tol;
  c.transgressivity_obstructed = !c.disjoint_commutative;
  auto same = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  if (same(p.alpha, -1) && same(p.beta, 0) && same(p.gamma, 1))
    c.known_identity = "Poincare";
  else if (same(p.alpha, 1) && same(p.beta, 1) && same(p.gamma, -1))
    c.known_identity = "basic central extension";
  return c;
}

}  // namespace gerbelab
