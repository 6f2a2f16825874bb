#pragma once

// SU(2) as unit quaternions: exponential and logarithm, the calibrated
// 3-form H and 2-form rho, disk and sphere grids, Wess-Zumino actions and the
// simplicial identities Delta H = d rho, Delta rho = 0.
//
// Lie algebra elements are imaginary quaternions stored as Vec3, with
// [a, b] = 2 a x b. Tangent vectors are always left-trivialised.

#include <array>
#include <cstdint>
#include <vector>

#include "gerbelab/loopcore.hpp"

namespace gerbelab {

inline constexpr double kAntipodeMargin = 0.2;
// Chord distance from -1 above which the identity is used as cone apex.
inline constexpr double kComfortableClearance = 1.0;

Quat qexp(const Vec3& v);
// Throws AntipodeError when the chord distance from q to -1 is below margin.
Vec3 qlog(const Quat& q, double margin = kAntipodeMargin);
// log(a^{-1} b) for nearby samples, no margin check.
Vec3 log_diff(const Quat& a, const Quat& b);
Vec3 adjoint(const Quat& g, const Vec3& v);  // g v g^{-1}

struct Calibration {
  double c_H = 0.0;  // H = c_H <xi1, [xi2, xi3]> with the dot product
  int s_rho = 1;     // global sign of rho
  int resolution = 0;
};

double eval_H(const Calibration& cal, const Vec3& a, const Vec3& b, const Vec3& c);
// Quadrature of H over SU(2) in the chart q = e^{i a} e^{j b} e^{i c}, with
// an n x n x n grid (trapezoid in a and c, Gauss-Legendre in b).
double integrate_H(int n, double c_H);
Calibration calibrate_H(int n = 48);
// The calibration a fresh run produces, computed once per process.
const Calibration& default_calibration();

struct TangentPair {
  Vec3 xi;   // at g1
  Vec3 eta;  // at g2
};
double eval_rho(const Calibration& cal, const Quat& g1, const Quat& g2, const TangentPair& v1,
                const TangentPair& v2);

// Polar grid: rows r_i = i/R (i = 0..R), columns theta_j = 2 pi j / M.
struct DiskMap {
  int R = 0;
  int M = 0;
  double collar = 0.125;
  std::vector<Quat> grid;

  const Quat& at(int i, int j) const { return grid[static_cast<std::size_t>(i) * M + j]; }
  Quat& at(int i, int j) { return grid[static_cast<std::size_t>(i) * M + j]; }
  Quat center() const { return grid.front(); }
  LoopSU2 boundary() const;
  // Bicubic interpolation in (r, theta); negative radii are reflected through
  // the centre and radii beyond 1 are clamped to the rim.
  Quat sample(double r, double theta) const;
  // Checks unit norm, the constant centre ring and the radial collar.
  static DiskMap make(int R, int M, double collar, std::vector<Quat> grid);
  static DiskMap constant(int R, int M, const Quat& q, double collar = 0.125);
};

enum class SphereProvenance { Raw, Glued, Trisected, Cylinder };

// Rows u_i = i/P run from the north pole (i = 0) to the south pole (i = P);
// columns are longitudes 2 pi j / M. Only the parameterisation is uniform;
// row spacing need not be geodesic latitude.
struct SphereMap {
  int P = 0;
  int M = 0;
  std::vector<Quat> grid;
  SphereProvenance provenance = SphereProvenance::Raw;

  const Quat& at(int i, int j) const { return grid[static_cast<std::size_t>(i) * M + j]; }
  Quat& at(int i, int j) { return grid[static_cast<std::size_t>(i) * M + j]; }
  static SphereMap make(int P, int M, std::vector<Quat> grid, SphereProvenance tag = SphereProvenance::Raw);
};

struct WzOptions {
  double margin = kAntipodeMargin;
  int attempts = 64;
  std::uint64_t seed = 7;
  double refine_tol = 1e-2;
};

// Integral of H over the geodesic cone on g * Phi with grid stride 1 or 2.
// Not reduced mod 1.
double wz_cone_integral(const SphereMap& phi, const Quat& g, const Calibration& cal, int stride);
// Left translation used by wz_action: the identity when it keeps the map at
// least kComfortableClearance from -1, otherwise the first seeded random
// candidate that does, or the best one seen. Fails below the margin.
Quat wz_translation(const SphereMap& phi, const WzOptions& opt = {});
// S_WZ in [0,1): Richardson-extrapolated cone integral reduced mod 1.
double wz_action(const SphereMap& phi, const Calibration& cal, const WzOptions& opt = {});
// Same, without the mod-1 reduction.
double wz_action_raw(const SphereMap& phi, const Calibration& cal, const WzOptions& opt = {});

double rho_disk_integral(const DiskMap& a, const DiskMap& b, const Calibration& cal);
double rho_sphere_integral(const SphereMap& a, const SphereMap& b, const Calibration& cal);

// Geodesic cone filling q0 exp(b(r) log(q0^{-1} tau(theta))) of a loop, with
// q0 the normalised sample mean and b a smooth step reaching 1 at the collar.
// Throws AntipodeError when some sample is too far from q0.
DiskMap cone_filling(const LoopSU2& tau, int R, double collar = 0.125);

SphereMap glue_sphere(const DiskMap& north, const DiskMap& south);
// Rows/columns default to 2R and 3M/2.
SphereMap trisect_sphere(const DiskMap& d12, const DiskMap& d23, const DiskMap& d13, int P = 0, int M = 0);
// Cylinder rows default to R.
SphereMap cylinder_sphere(const DiskMap& d0, const DiskMap& d1, const Homotopy& h, int rows = 0);

struct DeltaDefects {
  double dH_minus_drho = 0.0;
  double delta_rho = 0.0;
};
DeltaDefects delta_identity_defects(int points, std::uint64_t seed, const Calibration& cal);

// Pointwise pieces, exposed for tests.
double delta_rho_at(const Calibration& cal, const Quat& g1, const Quat& g2, const Quat& g3,
                    const std::array<Vec3, 3>& v, const std::array<Vec3, 3>& w);
double delta_H_at(const Calibration& cal, const Quat& g1, const Quat& g2, const std::array<Vec3, 2>& u,
                  const std::array<Vec3, 2>& v, const std::array<Vec3, 2>& w);
double d_rho_at(const Calibration& cal, const Quat& g1, const Quat& g2, const std::array<Vec3, 2>& u,
                const std::array<Vec3, 2>& v, const std::array<Vec3, 2>& w);

}  // namespace gerbelab
