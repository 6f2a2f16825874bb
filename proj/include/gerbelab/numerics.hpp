#pragma once

// Shared numerical plumbing: seeded randomness, smooth cutoffs, uniform-grid
// splines, spectral differentiation and finite-difference stencils.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace gerbelab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using Complex = std::complex<double>;

// exp(2 pi i x)
Complex phase(double turns);
// argument of z in turns, in (-1/2, 1/2]
double turns_of(Complex z);

// Deterministic generator. The bit stream of mt19937_64 is fixed by the
// standard; the conversions below are spelled out so that reports do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();                          // [0,1)
  double uniform(double a, double b);
  double normal();
  int integer(int lo, int hi);               // inclusive range
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// C-infinity step: 0 for x <= a, 1 for x >= b.
double smooth_step(double x, double a, double b);

// C-infinity bump supported in (a, b), equal to 1 on the middle third.
double smooth_bump(double x, double a, double b);

// Cubic spline through N+1 samples on the uniform grid j/N of [0,1].
class Spline {
 public:
  enum class Kind { Periodic, Natural };
  Spline(const std::vector<double>& y, Kind kind);
  double operator()(double x) const;
  double derivative(double x) const;

 private:
  double wrap(double x) const;
  std::shared_ptr<void> spline_;
  Kind kind_;
};

// Derivative of a 1-periodic function sampled at j/N (N distinct samples),
// computed by differentiating its trigonometric interpolant.
std::vector<double> spectral_derivative(std::span<const double> samples);

// Fourth-order first-derivative stencil at index j. For periodic grids the
// indices are reduced mod n; otherwise samples are 0..n and the stencil
// becomes one-sided near the ends. Weights must be divided by the spacing.
struct Stencil {
  std::array<int, 5> index{};
  std::array<double, 5> weight{};
};
Stencil fd4(int j, int n, bool periodic);

// Gauss-Legendre nodes and weights on [a, b].
std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b);

// Weights of 4-point Lagrange interpolation at fractional offset f in [0,1)
// for the nodes -1, 0, 1, 2.
std::array<double, 4> lagrange4(double f);

// Composite Simpson weights for n (even) intervals of spacing h.
std::vector<double> simpson_weights(int n, double h);

}  // namespace gerbelab
