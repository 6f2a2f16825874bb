#pragma once

// Seeded generators of smooth test data: loops, paths, disks, spheres and
// homotopies used by the audit batteries and the tests.

#include <functional>

#include "gerbelab/su2geom.hpp"

namespace gerbelab {

// Random trigonometric polynomial t -> R^3 of period 1 with the given number
// of modes and coefficient scale.
std::function<Vec3(double)> random_algebra_loop(Rng& rng, int modes, double amplitude);

// Canonical lift n t + c + sum_k a_k sin(2 pi k t + p_k), k <= 3.
LoopU1 random_loop_u1(Rng& rng, int n, int winding, double amplitude = 0.3);

// g exp(V(t)) with V a low-mode random field.
LoopSU2 random_loop_su2(Rng& rng, int n, double amplitude = 0.6, int modes = 2);
// base exp(bump(t) V(t)): sits at base near t = 0.
LoopSU2 based_loop_su2(Rng& rng, int n, const Quat& base, double amplitude = 0.6, int modes = 2);
// exp(bump(t; a, b) V(t)): equal to 1 outside (a, b).
LoopSU2 bump_loop_su2(Rng& rng, int n, double a, double b, double amplitude = 0.6, int modes = 2);

// Path from start to end with sitting instants of the given width:
// start exp(sigma(s) L) exp(bump(s) W(s)), L = log(start^{-1} end).
PathSU2 random_path_su2(Rng& rng, int n, const Quat& start, const Quat& end, double amplitude = 0.4,
                        double width = 1.0 / 16.0);

// phi exp(c(r) V(x, y)) with V a random polynomial field in Cartesian disk
// coordinates and c vanishing on the collar.
DiskMap perturb_disk(const DiskMap& phi, Rng& rng, double amplitude = 0.3);

// exp(A(x)) for a random quadratic field A on the unit sphere.
SphereMap random_sphere_map(Rng& rng, int P, int M, double amplitude = 0.8);
// c(f(x)) for a random curve c in SU(2) and a random scalar f.
SphereMap rank_one_sphere_map(Rng& rng, int P, int M);
// The unit sphere of imaginary quaternions, x -> x.
SphereMap equator_sphere_map(int P, int M);
SphereMap sphere_from_function(int P, int M, const std::function<Quat(const Vec3&)>& f);

// h(s, z) = tau((1 - s) z + s psi(z)): a rank-one homotopy from tau to
// tau o psi, with exact end rows.
Homotopy reparameterization_homotopy(const LoopSU2& tau, const std::function<double(double)>& psi, int T);

}  // namespace gerbelab
