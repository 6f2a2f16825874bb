#pragma once

// Transgression of 2-forms to loop and path spaces, path splittings,
// contractibility, the multiplicative complex, bigons and the curving
// identity, and the reciprocity cocycle of surface maps into U(1).
//
// Points and tangents are flat vectors. Torus factors store angles and rates
// in turns; SU(2) factors store (w, x, y, z) per point and three
// left-trivialised components per tangent.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gerbelab/su2geom.hpp"

namespace gerbelab {

enum class Base { U1, T2, SU2, T2xT2, SU2xSU2 };

using Point = Eigen::VectorXd;
using Tangent = Eigen::VectorXd;

int point_dim(Base b);
int tangent_dim(Base b);
std::string base_name(Base b);

// Tangent at p pointing to the nearby point q (q - p reduced mod 1 on tori, log(p^{-1} q)
// on SU(2) factors).
Tangent point_difference(Base b, const Point& p, const Point& q);
// p moved by the tangent v (p + v, or p exp(v)).
Point point_shift(Base b, const Point& p, const Tangent& v);

struct Form2 {
  Base base = Base::T2;
  std::string name;
  std::function<double(const Point&, const Tangent&, const Tangent&)> eval;

  double operator()(const Point& p, const Tangent& u, const Tangent& v) const { return eval(p, u, v); }
};

// "poincare_T2" or "su2_rho"; the latter uses the given calibration.
Form2 builtin_rho(const std::string& name, const Calibration& cal = default_calibration());
Form2 zero_form(Base b);
Form2 operator+(const Form2& a, const Form2& b);
Form2 operator*(double c, const Form2& a);

// Loop (periodic, last point equals the first) or path on the uniform grid.
struct Carrier {
  Base base = Base::T2;
  std::vector<Point> points;
  bool loop = false;

  int intervals() const { return static_cast<int>(points.size()) - 1; }
};

// Fourth-order derivative along the carrier.
std::vector<Tangent> carrier_derivative(const Carrier& c);

enum class Mode { Loop, Path };

// epsilon_tau(X) = int rho(tau', X) on loops; kappa_gamma(X) = int rho(X, gamma')
// on paths.
struct OneForm {
  Form2 source;
  Mode mode = Mode::Loop;
};
OneForm transgress(const Form2& rho, Mode mode);

double transgress_eval(const OneForm& form, const Carrier& carrier, const std::vector<Tangent>& field);

// Family sigma -> (gamma_1(sigma), gamma_2(sigma)) of path pairs with common
// endpoints, on a uniform sigma grid.
struct PathPairFamily {
  std::vector<Carrier> first;
  std::vector<Carrier> second;
};

// First and second halves of a loop, as paths; the second is reversed.
Carrier fuse(const Carrier& a, const Carrier& b);

// |int_Gamma cup^* eps - (int_{Gamma_2} kappa - int_{Gamma_1} kappa)|.
double path_splitting_defect(const Form2& rho, const PathPairFamily& family);

// Path and its analytic tangent, for the retraction check.
struct SmoothPath {
  Base base = Base::T2;
  std::function<Point(double)> at;
  std::function<Tangent(double)> derivative;  // left-trivialised on SU(2)
};
SmoothPath spline_path(const Carrier& c);

// |int kappa| along sigma -> gamma o (sigma phi).
double contractibility_defect(const Form2& rho, const SmoothPath& gamma, const SmoothingMap& phi, int sigma_steps = 64);

// Max of |Delta rho| over random points and tangents of G^3, where rho lives
// on G x G (Base::T2 for G = U(1), Base::SU2xSU2 for G = SU(2)).
double multiplicativity_defect(const Form2& rho, int points = 20, std::uint64_t seed = 1);
// The same for the transgressed 1-form on random loops of N intervals.
double multiplicativity_defect(const OneForm& form, int N = 128, int trials = 5, std::uint64_t seed = 1);

// Sigma(s, t) in P_x X on an (S+1) x (T+1) x (N+1) grid, index order (s, t, z).
struct Bigon {
  Base base = Base::T2;
  int S = 0;
  int T = 0;
  int N = 0;
  std::vector<Point> data;

  const Point& at(int i, int k, int j) const {
    return data[(static_cast<std::size_t>(i) * (T + 1) + k) * (N + 1) + j];
  }
  Point& at(int i, int k, int j) { return data[(static_cast<std::size_t>(i) * (T + 1) + k) * (N + 1) + j]; }
  Carrier path(int i, int k) const;
  static Bigon from_function(Base base, int S, int T, int N,
                             const std::function<Point(double, double, double)>& f);
  // Constant in s: the identity bigon at the family t -> gamma(t).
  static Bigon identity(Base base, int S, int T, int N, const std::function<Point(double, double)>& gamma);
};

// gamma_Sigma(t): Sigma(0,t) on [0,1/4], the endpoint curve s -> Sigma(phi(s),t)(1)
// on [1/4,1/2], Sigma(1,t) reversed on [1/2,3/4], the base point on [3/4,1].
// Grid index k of t; 4N intervals.
Carrier bigon_loop(const Bigon& sigma, int k, const SmoothingMap& phi);

struct CurvingSides {
  double loop_integral = 0.0;     // int gamma_Sigma^* eps
  double surface_integral = 0.0;  // int_Sigma ev_1^* rho + int_{gamma_1} kappa - int_{gamma_0} kappa
};
CurvingSides curving_sides(const Form2& rho, const Bigon& sigma, const SmoothingMap& phi);
// |exp(-2 pi i loop) - exp(-2 pi i surface)|.
double curving_defect(const Form2& rho, const Bigon& sigma, const SmoothingMap& phi);

// Map from a torus or a polar disk into U(1), as a real lift. On the torus
// the lift is w1 x + w2 y plus a periodic part sampled on n1 x n2 points; on
// the disk it is sampled on (n1 + 1) x n2 points (radius x angle).
struct SurfaceMap {
  enum class Kind { Torus, Disk };
  Kind kind = Kind::Torus;
  int n1 = 0;
  int n2 = 0;
  int w1 = 0;
  int w2 = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n2 + j]; }
  static SurfaceMap torus(int n1, int n2, int w1, int w2, const std::function<double(double, double)>& periodic);
  static SurfaceMap disk(int R, int M, const std::function<double(double, double)>& f);
};
SurfaceMap pointwise_product(const SurfaceMap& a, const SurfaceMap& b);

// int_Sigma (phi1, phi2)^* rho for a form on T = U(1)^2.
double surface_integral(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b);
// The same over the torus cylinder y in [y0, y1] (Simpson in y).
double cylinder_integral(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b, int row0, int row1);
// exp(2 pi i int_Sigma (phi1, phi2)^* rho).
Complex reciprocity_cocycle(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b);

}  // namespace gerbelab
