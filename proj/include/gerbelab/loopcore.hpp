#pragma once

// Sampled loops and paths in U(1) and SU(2), the operations on them that the
// extension constructions need, and the rank diagnostic for homotopies.

#include <Eigen/Geometry>
#include <functional>
#include <span>
#include <vector>

#include "gerbelab/numerics.hpp"

namespace gerbelab {

using Quat = Eigen::Quaterniond;
using Vec3 = Eigen::Vector3d;

inline constexpr double kEndpointTol = 1e-9;

// Component-wise cubic spline of a quaternion sequence on the uniform grid of
// [0,1], renormalised on evaluation.
class QuatSpline {
 public:
  QuatSpline(const std::vector<Quat>& q, Spline::Kind kind);
  Quat operator()(double t) const;
  // Left-trivialised derivative q^{-1} q'.
  Vec3 left_derivative(double t) const;

 private:
  std::vector<Spline> parts_;
};

// Real lift f of a circle-valued loop on the grid t_j = j/N, with
// f(1) = f(0) + winding.
struct RealLift {
  std::vector<double> values;
  int winding = 0;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  // Builds a lift from N+1 values. The winding is read off the endpoints and
  // values[N] is reset to values[0] + winding exactly. With canonical=true
  // the lift is shifted so that values[0] lies in [0,1).
  static RealLift make(std::vector<double> values, bool canonical = true);
  // Periodic part f(t) - winding * t, as N distinct samples.
  std::vector<double> periodic_part() const;
  double at(double t) const;  // spline of the periodic part plus the ramp
};

struct LoopU1 {
  RealLift lift;
  int intervals() const { return lift.intervals(); }
};

struct PathU1 {
  std::vector<double> values;
  int collar = 0;
  int intervals() const { return static_cast<int>(values.size()) - 1; }
  static PathU1 make(std::vector<double> values, int collar);
};

struct LoopSU2 {
  std::vector<Quat> samples;  // samples.back() == samples.front()
  int intervals() const { return static_cast<int>(samples.size()) - 1; }
  static LoopSU2 make(std::vector<Quat> samples);
  Quat at(double t) const;  // circular cubic spline, renormalised
};

struct PathSU2 {
  std::vector<Quat> samples;
  int collar = 0;
  int intervals() const { return static_cast<int>(samples.size()) - 1; }
  static PathSU2 make(std::vector<Quat> samples, int collar);
  Quat at(double s) const;
  // Left-trivialised derivative q^{-1} q'(s) of the spline interpolant.
  Vec3 derivative(double s) const;
};

// Nondecreasing map [0,1] -> [0,1], locally constant near both ends.
struct SmoothingMap {
  std::vector<double> values;
  int collar = 0;
  int intervals() const { return static_cast<int>(values.size()) - 1; }
  // phi(s) = smooth step from 0 at s = width to 1 at s = 1 - width.
  static SmoothingMap standard(int n, double width = 1.0 / 16.0);
  double at(double s) const;
  double derivative(double s) const;
};

// h(t_i, z_j) on a (T+1) x (N+1) grid, row-major in t.
struct Homotopy {
  int T = 0;
  int N = 0;
  std::vector<Quat> grid;
  bool periodic_z = true;
  bool periodic_t = false;

  const Quat& at(int i, int j) const { return grid[static_cast<std::size_t>(i) * (N + 1) + j]; }
  Quat& at(int i, int j) { return grid[static_cast<std::size_t>(i) * (N + 1) + j]; }
  LoopSU2 row(int i) const;
  // Row at a fractional time, by 4-point interpolation in t.
  std::vector<Quat> row_at(double t) const;
  static Homotopy from_function(int T, int N, const std::function<Quat(double, double)>& h,
                                bool periodic_z = true, bool periodic_t = false);
};

struct HomotopyU1 {
  int T = 0;
  int N = 0;
  std::vector<double> lifts;
};

// Group helpers on unit quaternions.
Quat pure(const Vec3& v);
Quat normalized(const Quat& q);
Quat random_unit_quat(Rng& rng);
// Geodesic step size |log(p^{-1} q)| used for resolution checks.
double step_angle(const Quat& p, const Quat& q);

RealLift unwrap(std::span<const double> raw_turns);
int winding_number(const LoopU1& tau);
double average_lift(const RealLift& f);

LoopU1 loop_multiply(const LoopU1& a, const LoopU1& b);
LoopU1 loop_inverse(const LoopU1& a);
LoopU1 constant_loop(int n, double value);
LoopSU2 loop_multiply(const LoopSU2& a, const LoopSU2& b);

PathU1 concat(const PathU1& a, const PathU1& b);
PathSU2 concat(const PathSU2& a, const PathSU2& b);
PathU1 reverse(const PathU1& g);
PathSU2 reverse(const PathSU2& g);
PathU1 regrid(const PathU1& g, int n);
PathSU2 regrid(const PathSU2& g, int n);

LoopU1 fuse(const PathU1& a, const PathU1& b);
LoopSU2 fuse(const PathSU2& a, const PathSU2& b);

PathU1 retraction(const PathU1& g, const SmoothingMap& phi, double t);
PathSU2 retraction(const PathSU2& g, const SmoothingMap& phi, double t);

LoopU1 rotate(const LoopU1& tau, double turns);
LoopSU2 rotate(const LoopSU2& tau, double turns);
// phi: N+1 samples of a strictly increasing lift with phi[N] = phi[0] + 1.
LoopU1 reparameterize(const LoopU1& tau, const std::vector<double>& phi);
LoopSU2 reparameterize(const LoopSU2& tau, const std::vector<double>& phi);

double rank_defect(const Homotopy& h);
double rank_defect(const HomotopyU1& h);

// Left-trivialised partial derivatives of a homotopy at every grid point:
// spectral along periodic directions, fourth-order differences otherwise.
void homotopy_tangents(const Homotopy& h, std::vector<Vec3>& d_t, std::vector<Vec3>& d_z);

}  // namespace gerbelab
