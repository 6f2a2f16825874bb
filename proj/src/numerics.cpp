#include "gerbelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <fftw3.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_spline.h>

#include "gerbelab/errors.hpp"

namespace gerbelab {

Complex phase(double turns) {
  const double a = kTwoPi * (turns - std::round(turns));
  return {std::cos(a), std::sin(a)};
}

double turns_of(Complex z) { return std::arg(z) / kTwoPi; }

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  // Box-Muller; u1 is kept away from zero.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

namespace {
double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace

double smooth_step(double x, double a, double b) {
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  const double s = (x - a) / (b - a);
  const double p = psi(s);
  return p / (p + psi(1.0 - s));
}

double smooth_bump(double x, double a, double b) {
  const double third = (b - a) / 3.0;
  return smooth_step(x, a, a + third) * (1.0 - smooth_step(x, b - third, b));
}

Spline::Spline(const std::vector<double>& y, Kind kind) : kind_(kind) {
  const std::size_t n = y.size();
  if (n < 4) throw InvalidArgument("spline needs at least 4 samples");
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = static_cast<double>(j) / static_cast<double>(n - 1);
  const gsl_interp_type* type =
      kind == Kind::Periodic ? gsl_interp_cspline_periodic : gsl_interp_cspline;
  gsl_spline* s = gsl_spline_alloc(type, n);
  std::vector<double> yy = y;
  if (kind == Kind::Periodic) yy.back() = yy.front();
  gsl_spline_init(s, x.data(), yy.data(), n);
  spline_ = std::shared_ptr<void>(s, [](void* p) { gsl_spline_free(static_cast<gsl_spline*>(p)); });
}

double Spline::wrap(double x) const {
  if (kind_ == Kind::Periodic) {
    x -= std::floor(x);
    return x;
  }
  return std::clamp(x, 0.0, 1.0);
}

double Spline::operator()(double x) const {
  return gsl_spline_eval(static_cast<gsl_spline*>(spline_.get()), wrap(x), nullptr);
}

double Spline::derivative(double x) const {
  return gsl_spline_eval_deriv(static_cast<gsl_spline*>(spline_.get()), wrap(x), nullptr);
}

std::vector<double> spectral_derivative(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<fftw_complex> spec(n / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(n, in.data(), spec.data(), FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (int k = 0; k <= n / 2; ++k) {
    const double re = spec[k][0];
    const double im = spec[k][1];
    // Nyquist mode has no well-defined derivative on the grid.
    const double w = (2 * k == n) ? 0.0 : kTwoPi * k;
    spec[k][0] = -w * im / n;
    spec[k][1] = w * re / n;
  }
  std::vector<double> out(n);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(n, spec.data(), out.data(), FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  return out;
}

Stencil fd4(int j, int n, bool periodic) {
  Stencil s;
  if (periodic || (j >= 2 && j <= n - 2)) {
    const int off[5] = {-2, -1, 0, 1, 2};
    const double w[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    for (int k = 0; k < 5; ++k) {
      int idx = j + off[k];
      if (periodic) idx = ((idx % n) + n) % n;
      s.index[k] = idx;
      s.weight[k] = w[k];
    }
    return s;
  }
  static const double edge0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
  static const double edge1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};
  const double* w = (j == 0 || j == n) ? edge0 : edge1;
  const bool low = j < 2;
  for (int k = 0; k < 5; ++k) {
    s.index[k] = low ? k : n - k;
    s.weight[k] = low ? w[k] : -w[k];
  }
  return s;
}

std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &out[i].first, &out[i].second, t);
  gsl_integration_glfixed_table_free(t);
  return out;
}

std::array<double, 4> lagrange4(double f) {
  return {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
          -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
}

std::vector<double> simpson_weights(int n, double h) {
  if (n % 2 != 0) throw InvalidArgument("Simpson rule needs an even number of intervals");
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (double& x : w) x *= h / 3.0;
  return w;
}

}  // namespace gerbelab
