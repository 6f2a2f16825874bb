#include "gerbelab/probes.hpp"

#include <cmath>

#include "gerbelab/errors.hpp"

namespace gerbelab {

namespace {

Vec3 random_vec(Rng& rng, double scale) { return scale * Vec3(rng.normal(), rng.normal(), rng.normal()); }

Vec3 sphere_point(double u, double lambda) {
  const double th = kPi * u;
  return Vec3(std::sin(th) * std::cos(lambda), std::sin(th) * std::sin(lambda), std::cos(th));
}

}  // namespace

std::function<Vec3(double)> random_algebra_loop(Rng& rng, int modes, double amplitude) {
  std::vector<Vec3> c(modes + 1), s(modes + 1);
  c[0] = random_vec(rng, amplitude);
  for (int k = 1; k <= modes; ++k) {
    c[k] = random_vec(rng, amplitude / k);
    s[k] = random_vec(rng, amplitude / k);
  }
  return [c, s, modes](double t) {
    Vec3 v = c[0];
    for (int k = 1; k <= modes; ++k) v += c[k] * std::cos(kTwoPi * k * t) + s[k] * std::sin(kTwoPi * k * t);
    return v;
  };
}

LoopU1 random_loop_u1(Rng& rng, int n, int winding, double amplitude) {
  const double c = rng.uniform();
  double a[3], p[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = amplitude * rng.uniform(-1.0, 1.0) / (k + 1);
    p[k] = rng.uniform(0.0, kTwoPi);
  }
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double t = static_cast<double>(j) / n;
    double x = c + winding * t;
    for (int k = 0; k < 3; ++k) x += a[k] * std::sin(kTwoPi * (k + 1) * t + p[k]);
    v[j] = x;
  }
  return LoopU1{RealLift::make(std::move(v))};
}

LoopSU2 random_loop_su2(Rng& rng, int n, double amplitude, int modes) {
  const Quat g = random_unit_quat(rng);
  const auto V = random_algebra_loop(rng, modes, amplitude);
  std::vector<Quat> s(n + 1);
  for (int j = 0; j < n; ++j) s[j] = g * qexp(V(static_cast<double>(j) / n));
  s[n] = s[0];
  return LoopSU2::make(std::move(s));
}

LoopSU2 based_loop_su2(Rng& rng, int n, const Quat& base, double amplitude, int modes) {
  const auto V = random_algebra_loop(rng, modes, amplitude);
  std::vector<Quat> s(n + 1);
  for (int j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / n;
    s[j] = base * qexp(smooth_bump(t, 0.05, 0.95) * V(t));
  }
  s[n] = s[0];
  return LoopSU2::make(std::move(s));
}

LoopSU2 bump_loop_su2(Rng& rng, int n, double a, double b, double amplitude, int modes) {
  const auto V = random_algebra_loop(rng, modes, amplitude);
  std::vector<Quat> s(n + 1);
  for (int j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / n;
    const double w = smooth_bump(t, a, b);
    s[j] = w == 0.0 ? Quat::Identity() : qexp(w * V(t));
  }
  s[n] = s[0];
  return LoopSU2::make(std::move(s));
}

PathSU2 random_path_su2(Rng& rng, int n, const Quat& start, const Quat& end, double amplitude, double width) {
  const Vec3 L = qlog(start.conjugate() * end, 1e-6);
  const auto W = random_algebra_loop(rng, 2, amplitude);
  std::vector<Quat> s(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double t = static_cast<double>(j) / n;
    const double sigma = smooth_step(t, width, 1.0 - width);
    const double w = smooth_bump(t, width, 1.0 - width);
    s[j] = start * qexp(sigma * L) * qexp(w * W(t));
  }
  const int collar = std::max(0, static_cast<int>(std::floor(width * n)) - 1);
  return PathSU2::make(std::move(s), collar);
}

DiskMap perturb_disk(const DiskMap& phi, Rng& rng, double amplitude) {
  const Vec3 a0 = random_vec(rng, amplitude), ax = random_vec(rng, amplitude), ay = random_vec(rng, amplitude);
  const Vec3 axy = random_vec(rng, amplitude / 2);
  const double top = 1.0 - phi.collar;
  DiskMap out = phi;
  for (int i = 0; i < phi.R; ++i) {
    const double r = static_cast<double>(i) / phi.R;
    const double c = 1.0 - smooth_step(r, 0.5 * top, top);
    if (c == 0.0) continue;
    for (int j = 0; j < phi.M; ++j) {
      const double th = kTwoPi * j / phi.M;
      const double x = r * std::cos(th), y = r * std::sin(th);
      out.at(i, j) = phi.at(i, j) * qexp(c * (a0 + x * ax + y * ay + x * y * axy));
    }
  }
  // The centre ring must be a single point.
  for (int j = 1; j < phi.M; ++j) out.at(0, j) = out.at(0, 0);
  return out;
}

SphereMap sphere_from_function(int P, int M, const std::function<Quat(const Vec3&)>& f) {
  std::vector<Quat> g(static_cast<std::size_t>(P + 1) * M);
  for (int i = 0; i <= P; ++i)
    for (int j = 0; j < M; ++j) {
      const bool pole = i == 0 || i == P;
      g[static_cast<std::size_t>(i) * M + j] = f(sphere_point(static_cast<double>(i) / P, pole ? 0.0 : kTwoPi * j / M));
    }
  return SphereMap::make(P, M, std::move(g));
}

SphereMap random_sphere_map(Rng& rng, int P, int M, double amplitude) {
  const Vec3 a0 = random_vec(rng, amplitude);
  Eigen::Matrix3d B;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) B(r, c) = amplitude * rng.normal();
  const Vec3 q1 = random_vec(rng, amplitude / 2), q2 = random_vec(rng, amplitude / 2);
  const Quat g = random_unit_quat(rng);
  return sphere_from_function(P, M, [=](const Vec3& x) {
    return g * qexp(a0 + B * x + x.x() * x.y() * q1 + x.z() * x.z() * q2);
  });
}

SphereMap rank_one_sphere_map(Rng& rng, int P, int M) {
  const Quat g = random_unit_quat(rng);
  const Vec3 a = random_vec(rng, 1.0), b = random_vec(rng, 0.5);
  const Vec3 k = random_vec(rng, 1.0);
  const double k2 = rng.normal();
  return sphere_from_function(P, M, [=](const Vec3& x) {
    const double f = k.dot(x) + k2 * x.x() * x.z();
    return g * qexp(f * a) * qexp(f * f * b);
  });
}

SphereMap equator_sphere_map(int P, int M) {
  return sphere_from_function(P, M, [](const Vec3& x) { return pure(x); });
}

Homotopy reparameterization_homotopy(const LoopSU2& tau, const std::function<double(double)>& psi, int T) {
  const QuatSpline s(tau.samples, Spline::Kind::Periodic);
  const int N = tau.intervals();
  Homotopy h = Homotopy::from_function(T, N, [&](double t, double z) { return s((1.0 - t) * z + t * psi(z)); });
  for (int j = 0; j <= N; ++j) h.at(0, j) = tau.samples[j];
  return h;
}

}  // namespace gerbelab
