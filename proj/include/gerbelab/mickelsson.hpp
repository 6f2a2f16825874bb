#pragma once

// The Mickelsson model of the central extension of LSU(2): pairs (disk map,
// phase) modulo the Wess-Zumino weighted equivalence, with product, fusion,
// thin transport and the derived constructions.

#include <functional>

#include "gerbelab/su2geom.hpp"

namespace gerbelab {

// Absolute bound on the second singular value of a homotopy's differential
// below which it counts as thin.
inline constexpr double kThinTol = 1e-3;

struct MickElement {
  DiskMap phi;
  Complex z{1.0, 0.0};

  static MickElement make(DiskMap phi, Complex z);
};

LoopSU2 boundary(const MickElement& e);

// z1 / (z2 exp(2 pi i S_WZ(glue(phi1, phi2)))); 1 means equivalent.
Complex equivalence_defect(const MickElement& e1, const MickElement& e2, const Calibration& cal);

MickElement product(const MickElement& e1, const MickElement& e2, const Calibration& cal);

// e12 over gamma1 u gamma2, e23 over gamma2 u gamma3, phi13 over gamma1 u gamma3.
MickElement fusion(const MickElement& e12, const MickElement& e23, const DiskMap& phi13, const Calibration& cal);

MickElement thin_transport(const MickElement& e0, const Homotopy& h, const DiskMap& phi1, const Calibration& cal,
                           double thin_tol = kThinTol);
MickElement parallel_transport(const MickElement& e0, const Homotopy& h, const DiskMap& phi1,
                               const Calibration& cal);

// Rotates the disk by the given number of turns in the angular coordinate.
MickElement rotate_action(const MickElement& e, double turns);

// (phi_thin, 1) over gamma u gamma, where phi_thin(r, theta) = gamma(u) with u
// a function of the horizontal coordinate r cos(theta) only.
MickElement canonical_section(const PathSU2& gamma, int R = 64);

// Lift of loop concatenation: thin-transport p_k to tau_k o phi_k, fuse, and
// thin-transport to con(tau1, tau2). Both loops must be based at the same
// point and sit still near it.
MickElement concat_lift(const MickElement& p1, const MickElement& p2, const SmoothingMap& phi, const Calibration& cal,
                        int T = 96);
// The concatenated loop tau1(2t) then tau2(2t - 1), on twice the grid.
LoopSU2 concat_loops(const LoopSU2& tau1, const LoopSU2& tau2);

struct Support {
  double a = 0.0;
  double b = 1.0;
};
inline constexpr double kSupportTol = 1e-10;

// Phase of p1 p2 against p2 p1. The boundary loops must equal 1 off their
// declared supports, which must be disjoint.
Complex commutator_defect(const MickElement& p1, const Support& s1, const MickElement& p2, const Support& s2,
                          const Calibration& cal);

// d/dt of the phase (in turns) of d_{1, exp(tX)}(1) against the reference
// disks qexp(t b(r) f(theta) xi0), for X = f xi0 given by N samples of f.
double splitting_central_component(const std::vector<double>& f, const Vec3& xi0, double step, const Calibration& cal,
                                   int R = 32);

struct PwDefect {
  double modulus = 0.0;      // |ratio - 1|
  double phase_turns = 0.0;  // arg(ratio) / 2 pi
};
PwDefect polyakov_wiegmann_defect(const SphereMap& a, const SphereMap& b, const Calibration& cal);

// Pointwise product of two disks on the same grid.
DiskMap disk_product(const DiskMap& a, const DiskMap& b);

}  // namespace gerbelab
