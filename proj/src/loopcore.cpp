#include "gerbelab/loopcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gerbelab/errors.hpp"

namespace gerbelab {

namespace {

void check_unit(const std::vector<Quat>& s) {
  for (const Quat& q : s)
    if (std::abs(q.norm() - 1.0) > 1e-12) throw InvalidArgument("sample is not a unit quaternion");
}

void check_resolution(const std::vector<Quat>& s) {
  for (std::size_t j = 0; j + 1 < s.size(); ++j)
    if (step_angle(s[j], s[j + 1]) >= kPi / 2)
      throw ResolutionError("adjacent samples are a quarter turn or more apart");
}

void check_collar(const auto& values, int collar) {
  const int n = static_cast<int>(values.size()) - 1;
  if (collar < 0 || 2 * collar > n) throw InvalidArgument("collar wider than half the path");
  for (int j = 1; j <= collar; ++j)
    if (!(values[j] == values[0]) || !(values[n - j] == values[n]))
      throw InvalidArgument("path does not sit still on its collars");
}

bool quat_close(const Quat& a, const Quat& b, double tol) {
  return (a.coeffs() - b.coeffs()).norm() <= tol;
}

double frac_turn(double t) { return t - std::floor(t); }

}  // namespace

QuatSpline::QuatSpline(const std::vector<Quat>& q, Spline::Kind kind) {
  std::array<std::vector<double>, 4> comp;
  for (const Quat& p : q) {
    comp[0].push_back(p.w());
    comp[1].push_back(p.x());
    comp[2].push_back(p.y());
    comp[3].push_back(p.z());
  }
  for (int c = 0; c < 4; ++c) parts_.emplace_back(comp[c], kind);
}

Quat QuatSpline::operator()(double t) const {
  return normalized(Quat(parts_[0](t), parts_[1](t), parts_[2](t), parts_[3](t)));
}

Vec3 QuatSpline::left_derivative(double t) const {
  const Eigen::Vector4d p(parts_[0](t), parts_[1](t), parts_[2](t), parts_[3](t));
  const Eigen::Vector4d dp(parts_[0].derivative(t), parts_[1].derivative(t), parts_[2].derivative(t),
                           parts_[3].derivative(t));
  const double n = p.norm();
  const Eigen::Vector4d q = p / n;
  const Eigen::Vector4d dq = (dp - q * q.dot(dp)) / n;
  const Quat qq(q[0], q[1], q[2], q[3]);
  const Quat dd(dq[0], dq[1], dq[2], dq[3]);
  return (qq.conjugate() * dd).vec();
}

Quat pure(const Vec3& v) { return Quat(0.0, v.x(), v.y(), v.z()); }

Quat normalized(const Quat& q) {
  const double n = q.norm();
  return Quat(q.w() / n, q.x() / n, q.y() / n, q.z() / n);
}

Quat random_unit_quat(Rng& rng) {
  const double w = rng.normal(), x = rng.normal(), y = rng.normal(), z = rng.normal();
  return normalized(Quat(w, x, y, z));
}

double step_angle(const Quat& p, const Quat& q) {
  const Quat d = p.conjugate() * q;
  return std::atan2(d.vec().norm(), d.w());
}

// ---- lifts -----------------------------------------------------------------

RealLift RealLift::make(std::vector<double> values, bool canonical) {
  if (values.size() < 2) throw InvalidArgument("a lift needs at least two samples");
  const std::size_t n = values.size() - 1;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(values[j + 1] - values[j]) >= 0.5)
      throw ResolutionError("lift jumps by half a turn or more between samples");
  RealLift f;
  f.winding = static_cast<int>(std::lround(values[n] - values[0]));
  if (std::abs(values[n] - values[0] - f.winding) > kEndpointTol)
    throw EndpointMismatch("lift does not close up to an integer winding");
  if (canonical) {
    const double shift = std::floor(values[0]);
    for (double& v : values) v -= shift;
  }
  values[n] = values[0] + f.winding;
  f.values = std::move(values);
  return f;
}

std::vector<double> RealLift::periodic_part() const {
  const int n = intervals();
  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) p[j] = values[j] - winding * static_cast<double>(j) / n;
  return p;
}

double RealLift::at(double t) const {
  std::vector<double> p = periodic_part();
  p.push_back(p.front());
  const Spline s(p, Spline::Kind::Periodic);
  return s(t) + winding * t;
}

PathU1 PathU1::make(std::vector<double> values, int collar) {
  check_collar(values, collar);
  return PathU1{std::move(values), collar};
}

LoopSU2 LoopSU2::make(std::vector<Quat> samples) {
  if (samples.size() < 5) throw InvalidArgument("loop needs at least 4 intervals");
  check_unit(samples);
  if (!quat_close(samples.front(), samples.back(), kEndpointTol))
    throw EndpointMismatch("loop does not close");
  samples.back() = samples.front();
  check_resolution(samples);
  return LoopSU2{std::move(samples)};
}

Quat LoopSU2::at(double t) const { return QuatSpline(samples, Spline::Kind::Periodic)(t); }

PathSU2 PathSU2::make(std::vector<Quat> samples, int collar) {
  check_unit(samples);
  check_collar(samples, collar);
  check_resolution(samples);
  return PathSU2{std::move(samples), collar};
}

Quat PathSU2::at(double s) const { return QuatSpline(samples, Spline::Kind::Natural)(s); }

Vec3 PathSU2::derivative(double s) const {
  return QuatSpline(samples, Spline::Kind::Natural).left_derivative(s);
}

SmoothingMap SmoothingMap::standard(int n, double width) {
  SmoothingMap m;
  m.values.resize(n + 1);
  for (int j = 0; j <= n; ++j) m.values[j] = smooth_step(static_cast<double>(j) / n, width, 1.0 - width);
  m.collar = static_cast<int>(std::floor(width * n));
  return m;
}

double SmoothingMap::at(double s) const {
  const int n = intervals();
  const double x = std::clamp(s, 0.0, 1.0) * n;
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-12) return values[static_cast<int>(r)];
  return std::clamp(Spline(values, Spline::Kind::Natural)(s), 0.0, 1.0);
}

double SmoothingMap::derivative(double s) const {
  return Spline(values, Spline::Kind::Natural).derivative(s);
}

LoopSU2 Homotopy::row(int i) const {
  std::vector<Quat> r(grid.begin() + static_cast<long>(i) * (N + 1),
                      grid.begin() + static_cast<long>(i + 1) * (N + 1));
  return LoopSU2{std::move(r)};
}

std::vector<Quat> Homotopy::row_at(double t) const {
  const double x = t * T;
  int i0 = static_cast<int>(std::floor(x));
  if (!periodic_t) i0 = std::clamp(i0, 1, T - 2);
  const auto w = lagrange4(x - i0);
  std::vector<Quat> out(N + 1);
  for (int j = 0; j <= N; ++j) {
    Eigen::Vector4d acc = Eigen::Vector4d::Zero();
    for (int k = 0; k < 4; ++k) {
      int i = i0 - 1 + k;
      if (periodic_t) i = ((i % T) + T) % T;
      acc += w[k] * at(i, j).coeffs();
    }
    out[j] = normalized(Quat(acc[3], acc[0], acc[1], acc[2]));
  }
  return out;
}

Homotopy Homotopy::from_function(int T, int N, const std::function<Quat(double, double)>& h,
                                 bool periodic_z, bool periodic_t) {
  Homotopy H{T, N, std::vector<Quat>(static_cast<std::size_t>(T + 1) * (N + 1)), periodic_z, periodic_t};
  for (int i = 0; i <= T; ++i)
    for (int j = 0; j <= N; ++j) H.at(i, j) = normalized(h(static_cast<double>(i) / T, static_cast<double>(j) / N));
  if (periodic_z)
    for (int i = 0; i <= T; ++i) H.at(i, N) = H.at(i, 0);
  if (periodic_t)
    for (int j = 0; j <= N; ++j) H.at(T, j) = H.at(0, j);
  return H;
}

// ---- elementary loop operations --------------------------------------------

RealLift unwrap(std::span<const double> raw) {
  if (raw.size() < 2) throw InvalidArgument("need at least two angles");
  std::vector<double> v(raw.size());
  v[0] = frac_turn(raw[0]);
  for (std::size_t j = 1; j < raw.size(); ++j) {
    double d = raw[j] - raw[j - 1];
    d -= std::round(d);
    if (std::abs(d) >= 0.5 - 1e-12) throw ResolutionError("successive angles differ by half a turn");
    v[j] = v[j - 1] + d;
  }
  return RealLift::make(std::move(v));
}

int winding_number(const LoopU1& tau) { return tau.lift.winding; }

double average_lift(const RealLift& f) {
  const int n = f.intervals();
  double mean = 0.0;
  for (double p : f.periodic_part()) mean += p;
  return mean / n + 0.5 * f.winding;
}

LoopU1 loop_multiply(const LoopU1& a, const LoopU1& b) {
  if (a.intervals() != b.intervals()) throw GridMismatch("loops on different grids");
  std::vector<double> v(a.lift.values.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.lift.values[j] + b.lift.values[j];
  return LoopU1{RealLift::make(std::move(v))};
}

LoopU1 loop_inverse(const LoopU1& a) {
  std::vector<double> v(a.lift.values.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = -a.lift.values[j];
  return LoopU1{RealLift::make(std::move(v))};
}

LoopU1 constant_loop(int n, double value) {
  return LoopU1{RealLift::make(std::vector<double>(n + 1, value))};
}

LoopSU2 loop_multiply(const LoopSU2& a, const LoopSU2& b) {
  if (a.intervals() != b.intervals()) throw GridMismatch("loops on different grids");
  std::vector<Quat> v(a.samples.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = normalized(a.samples[j] * b.samples[j]);
  return LoopSU2{std::move(v)};
}

PathU1 concat(const PathU1& a, const PathU1& b) {
  const double shift = std::round(a.values.back() - b.values.front());
  if (std::abs(a.values.back() - b.values.front() - shift) > kEndpointTol)
    throw EndpointMismatch("paths do not meet");
  std::vector<double> v = a.values;
  for (std::size_t j = 1; j < b.values.size(); ++j) v.push_back(b.values[j] + shift);
  return PathU1{std::move(v), std::min(a.collar, b.collar)};
}

PathSU2 concat(const PathSU2& a, const PathSU2& b) {
  if (!quat_close(a.samples.back(), b.samples.front(), kEndpointTol))
    throw EndpointMismatch("paths do not meet");
  std::vector<Quat> v = a.samples;
  v.insert(v.end(), b.samples.begin() + 1, b.samples.end());
  return PathSU2{std::move(v), std::min(a.collar, b.collar)};
}

PathU1 reverse(const PathU1& g) {
  return PathU1{std::vector<double>(g.values.rbegin(), g.values.rend()), g.collar};
}

PathSU2 reverse(const PathSU2& g) {
  return PathSU2{std::vector<Quat>(g.samples.rbegin(), g.samples.rend()), g.collar};
}

PathU1 regrid(const PathU1& g, int n) {
  const int m = g.intervals();
  const Spline s(g.values, Spline::Kind::Natural);
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s(static_cast<double>(j) / n);
  const int collar = (g.collar * n) / m;
  for (int j = 0; j <= collar; ++j) {
    v[j] = g.values.front();
    v[n - j] = g.values.back();
  }
  return PathU1{std::move(v), collar};
}

PathSU2 regrid(const PathSU2& g, int n) {
  const int m = g.intervals();
  const QuatSpline s(g.samples, Spline::Kind::Natural);
  std::vector<Quat> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s(static_cast<double>(j) / n);
  const int collar = (g.collar * n) / m;
  for (int j = 0; j <= collar; ++j) {
    v[j] = g.samples.front();
    v[n - j] = g.samples.back();
  }
  return PathSU2{std::move(v), collar};
}

LoopU1 fuse(const PathU1& a, const PathU1& b) {
  if (a.intervals() != b.intervals()) throw GridMismatch("fused paths must share a grid");
  const int n = a.intervals();
  const double d_end = std::round(a.values[n] - b.values[n]);
  const double d_start = std::round(a.values[0] - b.values[0]);
  if (std::abs(a.values[n] - b.values[n] - d_end) > kEndpointTol ||
      std::abs(a.values[0] - b.values[0] - d_start) > kEndpointTol)
    throw EndpointMismatch("fused paths must share both endpoints");
  std::vector<double> v(2 * n + 1);
  for (int j = 0; j <= n; ++j) v[j] = a.values[j];
  for (int j = n + 1; j <= 2 * n; ++j) v[j] = b.values[2 * n - j] + d_end;
  return LoopU1{RealLift::make(std::move(v))};
}

LoopSU2 fuse(const PathSU2& a, const PathSU2& b) {
  if (a.intervals() != b.intervals()) throw GridMismatch("fused paths must share a grid");
  const int n = a.intervals();
  if (!quat_close(a.samples[0], b.samples[0], kEndpointTol) ||
      !quat_close(a.samples[n], b.samples[n], kEndpointTol))
    throw EndpointMismatch("fused paths must share both endpoints");
  std::vector<Quat> v(2 * n + 1);
  for (int j = 0; j <= n; ++j) v[j] = a.samples[j];
  for (int j = n + 1; j <= 2 * n; ++j) v[j] = b.samples[2 * n - j];
  v[2 * n] = v[0];
  return LoopSU2{std::move(v)};
}

PathU1 retraction(const PathU1& g, const SmoothingMap& phi, double t) {
  const int n = phi.intervals();
  const Spline s(g.values, Spline::Kind::Natural);
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s(t * phi.values[j]);
  return PathU1{std::move(v), phi.collar};
}

PathSU2 retraction(const PathSU2& g, const SmoothingMap& phi, double t) {
  const int n = phi.intervals();
  const QuatSpline s(g.samples, Spline::Kind::Natural);
  std::vector<Quat> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s(t * phi.values[j]);
  return PathSU2{std::move(v), phi.collar};
}

namespace {

std::vector<double> periodic_with_end(const RealLift& f) {
  std::vector<double> p = f.periodic_part();
  p.push_back(p.front());
  return p;
}

LoopU1 resample(const LoopU1& tau, const std::vector<double>& at) {
  const Spline s(periodic_with_end(tau.lift), Spline::Kind::Periodic);
  const int n = static_cast<int>(at.size()) - 1;
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s(at[j]) + tau.lift.winding * at[j];
  return LoopU1{RealLift::make(std::move(v))};
}

LoopSU2 resample(const LoopSU2& tau, const std::vector<double>& at) {
  const QuatSpline s(tau.samples, Spline::Kind::Periodic);
  const int n = static_cast<int>(at.size()) - 1;
  std::vector<Quat> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s(at[j]);
  v[n] = v[0];
  return LoopSU2{std::move(v)};
}

// Index shift when the rotation is a whole number of grid steps.
bool grid_shift(double turns, int n, int& shift) {
  const double x = turns * n;
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-12) return false;
  shift = static_cast<int>(((static_cast<long>(r) % n) + n) % n);
  return true;
}

void check_diffeo(const std::vector<double>& phi) {
  const std::size_t n = phi.size() - 1;
  if (std::abs(phi[n] - phi[0] - 1.0) > kEndpointTol)
    throw NotOrientationPreserving("reparameterisation must have winding one");
  for (std::size_t j = 0; j < n; ++j)
    if (!(phi[j + 1] > phi[j])) throw NotOrientationPreserving("reparameterisation is not increasing");
}

}  // namespace

LoopU1 rotate(const LoopU1& tau, double turns) {
  const int n = tau.intervals();
  int shift = 0;
  if (grid_shift(turns, n, shift)) {
    std::vector<double> v(n + 1);
    for (int j = 0; j <= n; ++j) {
      const int k = j + shift;
      v[j] = tau.lift.values[k % n] + tau.lift.winding * (k / n);
    }
    return LoopU1{RealLift::make(std::move(v))};
  }
  std::vector<double> at(n + 1);
  for (int j = 0; j <= n; ++j) at[j] = static_cast<double>(j) / n + turns;
  return resample(tau, at);
}

LoopSU2 rotate(const LoopSU2& tau, double turns) {
  const int n = tau.intervals();
  int shift = 0;
  if (grid_shift(turns, n, shift)) {
    std::vector<Quat> v(n + 1);
    for (int j = 0; j <= n; ++j) v[j] = tau.samples[(j + shift) % n];
    return LoopSU2{std::move(v)};
  }
  std::vector<double> at(n + 1);
  for (int j = 0; j <= n; ++j) at[j] = static_cast<double>(j) / n + turns;
  return resample(tau, at);
}

LoopU1 reparameterize(const LoopU1& tau, const std::vector<double>& phi) {
  check_diffeo(phi);
  return resample(tau, phi);
}

LoopSU2 reparameterize(const LoopSU2& tau, const std::vector<double>& phi) {
  check_diffeo(phi);
  return resample(tau, phi);
}

// ---- rank diagnostic --------------------------------------------------------

void homotopy_tangents(const Homotopy& h, std::vector<Vec3>& d_t, std::vector<Vec3>& d_z) {
  const int T = h.T;
  const int N = h.N;
  const std::size_t total = static_cast<std::size_t>(T + 1) * (N + 1);
  d_t.assign(total, Vec3::Zero());
  d_z.assign(total, Vec3::Zero());
  auto idx = [N](int i, int j) { return static_cast<std::size_t>(i) * (N + 1) + j; };

  // Spectral derivative of the quaternion components along a periodic line.
  auto spectral_line = [](const std::vector<Quat>& line, std::vector<Vec3>& out) {
    const std::size_t n = line.size();
    std::array<std::vector<double>, 4> comp;
    for (auto& c : comp) c.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      comp[0][j] = line[j].w();
      comp[1][j] = line[j].x();
      comp[2][j] = line[j].y();
      comp[3][j] = line[j].z();
    }
    std::array<std::vector<double>, 4> d;
    for (int c = 0; c < 4; ++c) d[c] = spectral_derivative(comp[c]);
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Quat dq(d[0][j], d[1][j], d[2][j], d[3][j]);
      out[j] = (line[j].conjugate() * dq).vec();
    }
  };
  auto fd_line = [](const std::vector<Quat>& line, bool periodic, double step, std::vector<Vec3>& out) {
    const int n = periodic ? static_cast<int>(line.size()) : static_cast<int>(line.size()) - 1;
    out.assign(line.size(), Vec3::Zero());
    for (int j = 0; j < static_cast<int>(line.size()); ++j) {
      const Stencil s = fd4(periodic ? j % n : j, n, periodic);
      Vec3 acc = Vec3::Zero();
      const Quat base_inv = line[j].conjugate();
      for (int k = 0; k < 5; ++k) {
        if (s.weight[k] == 0.0) continue;
        const Quat d = base_inv * line[s.index[k]];
        const double a = std::atan2(d.vec().norm(), d.w());
        const double nv = d.vec().norm();
        const Vec3 lg = nv > 0 ? Vec3(d.vec() * (a / nv)) : Vec3::Zero();
        acc += s.weight[k] * lg;
      }
      out[j] = acc / step;
    }
  };

  std::vector<Quat> line;
  std::vector<Vec3> der;
  for (int i = 0; i <= T; ++i) {
    if (h.periodic_z) {
      line.assign(h.grid.begin() + idx(i, 0), h.grid.begin() + idx(i, N));
      spectral_line(line, der);
      for (int j = 0; j < N; ++j) d_z[idx(i, j)] = der[j];
      d_z[idx(i, N)] = der[0];
    } else {
      line.assign(h.grid.begin() + idx(i, 0), h.grid.begin() + idx(i, N) + 1);
      fd_line(line, false, 1.0 / N, der);
      for (int j = 0; j <= N; ++j) d_z[idx(i, j)] = der[j];
    }
  }
  for (int j = 0; j <= N; ++j) {
    line.clear();
    if (h.periodic_t) {
      for (int i = 0; i < T; ++i) line.push_back(h.at(i, j));
      spectral_line(line, der);
      for (int i = 0; i < T; ++i) d_t[idx(i, j)] = der[i];
      d_t[idx(T, j)] = der[0];
    } else {
      for (int i = 0; i <= T; ++i) line.push_back(h.at(i, j));
      fd_line(line, false, 1.0 / T, der);
      for (int i = 0; i <= T; ++i) d_t[idx(i, j)] = der[i];
    }
  }
}

double rank_defect(const Homotopy& h) {
  if (h.T < 2 || h.N < 2) throw InvalidArgument("rank defect needs at least a 3x3 grid");
  std::vector<Vec3> d_t, d_z;
  homotopy_tangents(h, d_t, d_z);
  const int i_lo = h.periodic_t ? 0 : 2, i_hi = h.periodic_t ? h.T : h.T - 2;
  const int j_lo = h.periodic_z ? 0 : 2, j_hi = h.periodic_z ? h.N : h.N - 2;
  double worst = 0.0;
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = j_lo; j <= j_hi; ++j) {
      const Vec3& a = d_t[static_cast<std::size_t>(i) * (h.N + 1) + j];
      const Vec3& b = d_z[static_cast<std::size_t>(i) * (h.N + 1) + j];
      const double area = a.cross(b).norm();
      const double s = a.squaredNorm() + b.squaredNorm();
      const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * area * area));
      const double sigma1 = std::sqrt(0.5 * (s + disc));
      if (sigma1 > 0.0) worst = std::max(worst, area / sigma1);
    }
  return worst;
}

double rank_defect(const HomotopyU1&) { return 0.0; }

}  // namespace gerbelab
