#include "gerbelab/transgress.hpp"

#include <cmath>
#include <memory>

#include "gerbelab/errors.hpp"
#include "gerbelab/probes.hpp"

namespace gerbelab {

namespace {

// Factor layout: number of SU(2) factors and of torus coordinates.
struct Layout {
  int su2 = 0;
  int torus = 0;
};

Layout layout(Base b) {
  switch (b) {
    case Base::U1: return {0, 1};
    case Base::T2: return {0, 2};
    case Base::SU2: return {1, 0};
    case Base::T2xT2: return {0, 4};
    case Base::SU2xSU2: return {2, 0};
  }
  return {};
}

Quat quat_at(const Point& p, int f) { return Quat(p[4 * f], p[4 * f + 1], p[4 * f + 2], p[4 * f + 3]); }

void put_quat(Point& p, int f, const Quat& q) {
  p[4 * f] = q.w();
  p[4 * f + 1] = q.x();
  p[4 * f + 2] = q.y();
  p[4 * f + 3] = q.z();
}

Vec3 vec_at(const Tangent& v, int f) { return Vec3(v[3 * f], v[3 * f + 1], v[3 * f + 2]); }

void put_vec(Tangent& v, int f, const Vec3& x) {
  v[3 * f] = x.x();
  v[3 * f + 1] = x.y();
  v[3 * f + 2] = x.z();
}

// Derivative along a line of points by the fourth-order stencil.
template <class Get>
Tangent line_derivative(Base b, int j, int n, bool periodic, double h, Get get) {
  const Stencil s = fd4(j, n, periodic);
  const Point& p = get(periodic ? j % n : j);
  Tangent acc = Tangent::Zero(tangent_dim(b));
  for (int k = 0; k < 5; ++k) {
    if (s.weight[k] == 0.0) continue;
    acc += s.weight[k] * point_difference(b, p, get(s.index[k]));
  }
  return acc / h;
}

std::vector<double> trapezoid(int n) {
  std::vector<double> w(n + 1, 1.0 / n);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// Simpson weights when the interval count is even, trapezoid otherwise.
std::vector<double> line_weights(int n) { return n % 2 == 0 ? simpson_weights(n, 1.0 / n) : trapezoid(n); }

// Interpolates a sequence of points on the uniform grid of [0,1].
class PointSpline {
 public:
  PointSpline(Base b, const std::vector<Point>& pts) : base_(b), lay_(layout(b)) {
    for (int c = 0; c < lay_.torus; ++c) {
      std::vector<double> y;
      for (const Point& p : pts) y.push_back(p[c]);
      coords_.emplace_back(y, Spline::Kind::Natural);
    }
    for (int f = 0; f < lay_.su2; ++f) {
      std::vector<Quat> q;
      for (const Point& p : pts) q.push_back(quat_at(p, f));
      quats_.emplace_back(q, Spline::Kind::Natural);
    }
  }
  Point operator()(double s) const {
    Point p(point_dim(base_));
    for (int c = 0; c < lay_.torus; ++c) p[c] = coords_[c](s);
    for (int f = 0; f < lay_.su2; ++f) put_quat(p, f, quats_[f](s));
    return p;
  }
  Tangent derivative(double s) const {
    Tangent v(tangent_dim(base_));
    for (int c = 0; c < lay_.torus; ++c) v[c] = coords_[c].derivative(s);
    for (int f = 0; f < lay_.su2; ++f) put_vec(v, f, quats_[f].left_derivative(s));
    return v;
  }

 private:
  Base base_;
  Layout lay_;
  std::vector<Spline> coords_;
  std::vector<QuatSpline> quats_;
};

}  // namespace

int point_dim(Base b) {
  const Layout l = layout(b);
  return 4 * l.su2 + l.torus;
}

int tangent_dim(Base b) {
  const Layout l = layout(b);
  return 3 * l.su2 + l.torus;
}

std::string base_name(Base b) {
  switch (b) {
    case Base::U1: return "U1";
    case Base::T2: return "T2";
    case Base::SU2: return "SU2";
    case Base::T2xT2: return "T2xT2";
    case Base::SU2xSU2: return "SU2xSU2";
  }
  return "?";
}

Tangent point_difference(Base b, const Point& p, const Point& q) {
  const Layout l = layout(b);
  if (l.su2 == 0) {
    // Torus angles are in turns: take the shortest representative.
    Tangent d = q - p;
    for (int c = 0; c < d.size(); ++c) d[c] -= std::round(d[c]);
    return d;
  }
  Tangent v(3 * l.su2);
  for (int f = 0; f < l.su2; ++f) put_vec(v, f, log_diff(quat_at(p, f), quat_at(q, f)));
  return v;
}

Point point_shift(Base b, const Point& p, const Tangent& v) {
  const Layout l = layout(b);
  if (l.su2 == 0) return p + v;
  Point q(4 * l.su2);
  for (int f = 0; f < l.su2; ++f) put_quat(q, f, quat_at(p, f) * qexp(vec_at(v, f)));
  return q;
}

Form2 builtin_rho(const std::string& name, const Calibration& cal) {
  if (name == "poincare_T2" || name == "poincare")
    return Form2{Base::T2, "poincare_T2",
                 [](const Point&, const Tangent& u, const Tangent& v) { return u[0] * v[1] - v[0] * u[1]; }};
  if (name == "su2_rho" || name == "su2rho")
    return Form2{Base::SU2xSU2, "su2_rho", [cal](const Point& p, const Tangent& u, const Tangent& v) {
                   return eval_rho(cal, quat_at(p, 0), quat_at(p, 1), {vec_at(u, 0), vec_at(u, 1)},
                                   {vec_at(v, 0), vec_at(v, 1)});
                 }};
  throw UnknownForm("unknown built-in form '" + name + "'");
}

Form2 zero_form(Base b) {
  return Form2{b, "zero", [](const Point&, const Tangent&, const Tangent&) { return 0.0; }};
}

Form2 operator+(const Form2& a, const Form2& b) {
  if (a.base != b.base) throw InvalidArgument("forms on different bases");
  return Form2{a.base, a.name + "+" + b.name, [a, b](const Point& p, const Tangent& u, const Tangent& v) {
                 return a.eval(p, u, v) + b.eval(p, u, v);
               }};
}

Form2 operator*(double c, const Form2& a) {
  return Form2{a.base, std::to_string(c) + "*" + a.name,
               [c, a](const Point& p, const Tangent& u, const Tangent& v) { return c * a.eval(p, u, v); }};
}

// ---- transgression ---------------------------------------------------------------

std::vector<Tangent> carrier_derivative(const Carrier& c) {
  const int n = c.intervals();
  if (n < 4) throw InvalidArgument("carrier needs at least four intervals");
  std::vector<Tangent> d(n + 1);
  auto get = [&c](int i) -> const Point& { return c.points[i]; };
  for (int j = 0; j <= n; ++j) d[j] = line_derivative(c.base, j, n, c.loop, 1.0 / n, get);
  return d;
}

OneForm transgress(const Form2& rho, Mode mode) { return OneForm{rho, mode}; }

double transgress_eval(const OneForm& form, const Carrier& carrier, const std::vector<Tangent>& field) {
  if (field.size() != carrier.points.size()) throw GridMismatch("tangent field and carrier on different grids");
  if (carrier.base != form.source.base) throw InvalidArgument("carrier lives on another base");
  const int n = carrier.intervals();
  const std::vector<Tangent> d = carrier_derivative(carrier);
  double total = 0.0;
  if (form.mode == Mode::Loop) {
    for (int j = 0; j < n; ++j) total += form.source(carrier.points[j], d[j], field[j]);
    return total / n;
  }
  const std::vector<double> w = trapezoid(n);
  for (int j = 0; j <= n; ++j) total += w[j] * form.source(carrier.points[j], field[j], d[j]);
  return total;
}

Carrier fuse(const Carrier& a, const Carrier& b) {
  const int n = a.intervals();
  if (b.intervals() != n || a.base != b.base) throw GridMismatch("fused paths must share a grid");
  Carrier out{a.base, std::vector<Point>(2 * n + 1), true};
  for (int j = 0; j <= n; ++j) out.points[j] = a.points[j];
  for (int j = n + 1; j < 2 * n; ++j) out.points[j] = b.points[2 * n - j];
  out.points[2 * n] = out.points[0];
  return out;
}

double path_splitting_defect(const Form2& rho, const PathPairFamily& family) {
  const int K = static_cast<int>(family.first.size()) - 1;
  if (K < 4 || family.second.size() != family.first.size()) throw InvalidArgument("family needs at least 5 members");
  const Base b = rho.base;
  const int n = family.first[0].intervals();
  for (int k = 0; k <= K; ++k) {
    const Carrier& p = family.first[k];
    const Carrier& q = family.second[k];
    if (p.intervals() != n || q.intervals() != n) throw GridMismatch("family members on different grids");
    if (point_difference(b, p.points.front(), q.points.front()).norm() > kEndpointTol ||
        point_difference(b, p.points.back(), q.points.back()).norm() > kEndpointTol)
      throw EndpointDrift("paths of a pair do not share their endpoints");
  }
  // Variation fields along sigma.
  auto variation = [&](const std::vector<Carrier>& fam, int k) {
    std::vector<Tangent> X(n + 1);
    for (int j = 0; j <= n; ++j)
      X[j] = line_derivative(b, k, K, false, 1.0 / K, [&](int i) -> const Point& { return fam[i].points[j]; });
    return X;
  };
  const OneForm eps = transgress(rho, Mode::Loop), kappa = transgress(rho, Mode::Path);
  const std::vector<double> w = line_weights(K);
  double lhs = 0.0, rhs = 0.0;
  for (int k = 0; k <= K; ++k) {
    const std::vector<Tangent> X1 = variation(family.first, k), X2 = variation(family.second, k);
    std::vector<Tangent> X(2 * n + 1);
    for (int j = 0; j <= n; ++j) X[j] = X1[j];
    for (int j = n + 1; j <= 2 * n; ++j) X[j] = X2[2 * n - j];
    X[2 * n] = X[0];
    lhs += w[k] * transgress_eval(eps, fuse(family.first[k], family.second[k]), X);
    rhs += w[k] * (transgress_eval(kappa, family.second[k], X2) - transgress_eval(kappa, family.first[k], X1));
  }
  return std::abs(lhs - rhs);
}

SmoothPath spline_path(const Carrier& c) {
  auto s = std::make_shared<PointSpline>(c.base, c.points);
  return SmoothPath{c.base, [s](double t) { return (*s)(t); }, [s](double t) { return s->derivative(t); }};
}

double contractibility_defect(const Form2& rho, const SmoothPath& gamma, const SmoothingMap& phi, int sigma_steps) {
  const int n = phi.intervals();
  const std::vector<double> ws = trapezoid(n), wt = line_weights(sigma_steps);
  double total = 0.0;
  for (int k = 0; k <= sigma_steps; ++k) {
    const double sigma = static_cast<double>(k) / sigma_steps;
    double kappa = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double f = phi.values[j];
      const double df = phi.derivative(static_cast<double>(j) / n);
      const Tangent g = gamma.derivative(sigma * f);
      // d/dsigma of gamma(sigma phi(s)) and d/ds of it.
      kappa += ws[j] * rho(gamma.at(sigma * f), f * g, sigma * df * g);
    }
    total += wt[k] * kappa;
  }
  return std::abs(total);
}

// ---- multiplicative complex --------------------------------------------------------

namespace {

// The group G with rho on G x G.
struct GroupOps {
  Base factor;
  int pd;
  int td;
  bool su2;
};

GroupOps group_of(Base b) {
  switch (b) {
    case Base::T2: return {Base::U1, 1, 1, false};
    case Base::T2xT2: return {Base::T2, 2, 2, false};
    case Base::SU2xSU2: return {Base::SU2, 4, 3, true};
    default: throw InvalidArgument("form does not live on a product G x G");
  }
}

Point mul(const GroupOps& g, const Point& a, const Point& b) {
  if (!g.su2) return a + b;
  Point p(4);
  put_quat(p, 0, quat_at(a, 0) * quat_at(b, 0));
  return p;
}

// Left-trivialised tangent of the product at (a, b).
Tangent mul_tangent(const GroupOps& g, const Point& b, const Tangent& u, const Tangent& v) {
  if (!g.su2) return u + v;
  Tangent t(3);
  put_vec(t, 0, adjoint(quat_at(b, 0).conjugate(), vec_at(u, 0)) + vec_at(v, 0));
  return t;
}

Point pair(const Point& a, const Point& b) {
  Point p(a.size() + b.size());
  p << a, b;
  return p;
}

Point random_point(const GroupOps& g, Rng& rng) {
  Point p(g.pd);
  if (g.su2) {
    put_quat(p, 0, random_unit_quat(rng));
  } else {
    for (int i = 0; i < g.pd; ++i) p[i] = rng.uniform();
  }
  return p;
}

Tangent random_tangent(const GroupOps& g, Rng& rng) {
  Tangent t(g.td);
  for (int i = 0; i < g.td; ++i) t[i] = rng.normal();
  return t;
}

}  // namespace

double multiplicativity_defect(const Form2& rho, int points, std::uint64_t seed) {
  const GroupOps g = group_of(rho.base);
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    std::array<Point, 3> p;
    std::array<Tangent, 3> u, v;
    for (int i = 0; i < 3; ++i) p[i] = random_point(g, rng);
    for (int i = 0; i < 3; ++i) {
      u[i] = random_tangent(g, rng);
      v[i] = random_tangent(g, rng);
    }
    const Point p12 = mul(g, p[0], p[1]), p23 = mul(g, p[1], p[2]);
    const double d = rho(pair(p[0], p[1]), pair(u[0], u[1]), pair(v[0], v[1])) +
                     rho(pair(p12, p[2]), pair(mul_tangent(g, p[1], u[0], u[1]), u[2]),
                         pair(mul_tangent(g, p[1], v[0], v[1]), v[2])) -
                     rho(pair(p[1], p[2]), pair(u[1], u[2]), pair(v[1], v[2])) -
                     rho(pair(p[0], p23), pair(u[0], mul_tangent(g, p[2], u[1], u[2])),
                         pair(v[0], mul_tangent(g, p[2], v[1], v[2])));
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

double multiplicativity_defect(const OneForm& form, int N, int trials, std::uint64_t seed) {
  const GroupOps g = group_of(form.source.base);
  Rng rng(seed);
  const bool loop = form.mode == Mode::Loop;
  auto random_curve = [&]() {
    std::vector<Point> pts(N + 1);
    if (g.su2) {
      const LoopSU2 l = random_loop_su2(rng, N);
      for (int j = 0; j <= N; ++j) {
        pts[j] = Point(4);
        put_quat(pts[j], 0, l.samples[j]);
      }
    } else {
      std::vector<LoopU1> parts;
      for (int c = 0; c < g.pd; ++c) parts.push_back(random_loop_u1(rng, N, loop ? rng.integer(-1, 1) : 0));
      for (int j = 0; j <= N; ++j) {
        pts[j] = Point(g.pd);
        for (int c = 0; c < g.pd; ++c) pts[j][c] = parts[c].lift.values[j];
      }
    }
    return pts;
  };
  auto random_field = [&]() {
    const auto V = random_algebra_loop(rng, 2, 1.0);
    std::vector<Tangent> f(N + 1);
    for (int j = 0; j <= N; ++j) {
      const Vec3 x = V(static_cast<double>(j) / N);
      f[j] = Tangent(g.td);
      for (int c = 0; c < g.td; ++c) f[j][c] = x[c];
    }
    return f;
  };
  // The 1-form on the pair (a, b) of curves with fields (x, y).
  auto eval = [&](const std::vector<Point>& a, const std::vector<Point>& b, const std::vector<Tangent>& x,
                  const std::vector<Tangent>& y) {
    Carrier c{form.source.base, std::vector<Point>(N + 1), loop};
    std::vector<Tangent> f(N + 1);
    for (int j = 0; j <= N; ++j) {
      c.points[j] = pair(a[j], b[j]);
      f[j] = pair(x[j], y[j]);
    }
    return transgress_eval(form, c, f);
  };
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::array<std::vector<Point>, 3> c{random_curve(), random_curve(), random_curve()};
    std::array<std::vector<Tangent>, 3> x{random_field(), random_field(), random_field()};
    std::vector<Point> c12(N + 1), c23(N + 1);
    std::vector<Tangent> x12(N + 1), x23(N + 1);
    for (int j = 0; j <= N; ++j) {
      c12[j] = mul(g, c[0][j], c[1][j]);
      c23[j] = mul(g, c[1][j], c[2][j]);
      x12[j] = mul_tangent(g, c[1][j], x[0][j], x[1][j]);
      x23[j] = mul_tangent(g, c[2][j], x[1][j], x[2][j]);
    }
    const double d = eval(c[0], c[1], x[0], x[1]) + eval(c12, c[2], x12, x[2]) - eval(c[1], c[2], x[1], x[2]) -
                     eval(c[0], c23, x[0], x23);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

// ---- bigons --------------------------------------------------------------------------

Carrier Bigon::path(int i, int k) const {
  Carrier c{base, std::vector<Point>(N + 1), false};
  for (int j = 0; j <= N; ++j) c.points[j] = at(i, k, j);
  return c;
}

Bigon Bigon::from_function(Base base, int S, int T, int N, const std::function<Point(double, double, double)>& f) {
  Bigon b{base, S, T, N, std::vector<Point>(static_cast<std::size_t>(S + 1) * (T + 1) * (N + 1))};
  for (int i = 0; i <= S; ++i)
    for (int k = 0; k <= T; ++k)
      for (int j = 0; j <= N; ++j)
        b.at(i, k, j) = f(static_cast<double>(i) / S, static_cast<double>(k) / T, static_cast<double>(j) / N);
  return b;
}

Bigon Bigon::identity(Base base, int S, int T, int N, const std::function<Point(double, double)>& gamma) {
  return from_function(base, S, T, N, [&gamma](double, double t, double z) { return gamma(t, z); });
}

Carrier bigon_loop(const Bigon& sigma, int k, const SmoothingMap& phi) {
  const int N = sigma.N;
  if (phi.intervals() != N) throw GridMismatch("smoothing map must live on the path grid");
  std::vector<Point> ends(sigma.S + 1);
  for (int i = 0; i <= sigma.S; ++i) ends[i] = sigma.at(i, k, N);
  const PointSpline E(sigma.base, ends);
  Carrier c{sigma.base, std::vector<Point>(4 * N + 1), true};
  for (int m = 0; m <= N; ++m) {
    c.points[m] = sigma.at(0, k, m);
    const double s = phi.values[m];
    c.points[N + m] = s == 0.0 ? ends.front() : (s == 1.0 ? ends.back() : E(s));
    c.points[2 * N + m] = sigma.at(sigma.S, k, N - m);
    c.points[3 * N + m] = sigma.at(0, k, 0);
  }
  return c;
}

CurvingSides curving_sides(const Form2& rho, const Bigon& sigma, const SmoothingMap& phi) {
  if (sigma.base != rho.base) throw InvalidArgument("bigon lives on another base");
  const int S = sigma.S, T = sigma.T, N = sigma.N;
  const Base b = sigma.base;
  const std::vector<double> wt = line_weights(T), ws = line_weights(S), wz = line_weights(N);
  CurvingSides out;

  // Loop side: int dt int dz rho(d_z h, d_t h).
  std::vector<Carrier> loops(T + 1);
  for (int k = 0; k <= T; ++k) loops[k] = bigon_loop(sigma, k, phi);
  const int L = 4 * N;
  for (int k = 0; k <= T; ++k) {
    const std::vector<Tangent> dz = carrier_derivative(loops[k]);
    double inner = 0.0;
    for (int j = 0; j < L; ++j) {
      const Tangent dt = line_derivative(b, k, T, false, 1.0 / T, [&](int i) -> const Point& { return loops[i].points[j]; });
      inner += rho(loops[k].points[j], dz[j], dt);
    }
    out.loop_integral += wt[k] * inner / L;
  }

  // Endpoint surface: int ds dt rho(d_s E, d_t E).
  double surf = 0.0;
  for (int i = 0; i <= S; ++i)
    for (int k = 0; k <= T; ++k) {
      const Tangent ds = line_derivative(b, i, S, false, 1.0 / S, [&](int a) -> const Point& { return sigma.at(a, k, N); });
      const Tangent dt = line_derivative(b, k, T, false, 1.0 / T, [&](int a) -> const Point& { return sigma.at(i, a, N); });
      surf += ws[i] * wt[k] * rho(sigma.at(i, k, N), ds, dt);
    }

  // kappa along the two boundary families t -> Sigma(i, t).
  auto kappa_line = [&](int i) {
    double total = 0.0;
    for (int k = 0; k <= T; ++k) {
      const std::vector<Tangent> dz = carrier_derivative(sigma.path(i, k));
      double inner = 0.0;
      for (int j = 0; j <= N; ++j) {
        const Tangent dt = line_derivative(b, k, T, false, 1.0 / T, [&](int a) -> const Point& { return sigma.at(i, a, j); });
        inner += wz[j] * rho(sigma.at(i, k, j), dt, dz[j]);
      }
      total += wt[k] * inner;
    }
    return total;
  };
  out.surface_integral = surf + kappa_line(S) - kappa_line(0);
  return out;
}

double curving_defect(const Form2& rho, const Bigon& sigma, const SmoothingMap& phi) {
  const CurvingSides c = curving_sides(rho, sigma, phi);
  return std::abs(phase(-c.loop_integral) - phase(-c.surface_integral));
}

// ---- surface maps --------------------------------------------------------------------

SurfaceMap SurfaceMap::torus(int n1, int n2, int w1, int w2, const std::function<double(double, double)>& periodic) {
  SurfaceMap m{Kind::Torus, n1, n2, w1, w2, std::vector<double>(static_cast<std::size_t>(n1) * n2)};
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      m.values[static_cast<std::size_t>(i) * n2 + j] = periodic(static_cast<double>(i) / n1, static_cast<double>(j) / n2);
  return m;
}

SurfaceMap SurfaceMap::disk(int R, int M, const std::function<double(double, double)>& f) {
  if (M % 2 != 0) throw InvalidArgument("disk needs an even angular count");
  SurfaceMap m{Kind::Disk, R, M, 0, 0, std::vector<double>(static_cast<std::size_t>(R + 1) * M)};
  for (int i = 0; i <= R; ++i)
    for (int j = 0; j < M; ++j)
      m.values[static_cast<std::size_t>(i) * M + j] = f(static_cast<double>(i) / R, kTwoPi * j / M);
  return m;
}

namespace {

void check_pair(const SurfaceMap& a, const SurfaceMap& b) {
  if (a.kind != b.kind || a.n1 != b.n1 || a.n2 != b.n2 || a.values.size() != b.values.size())
    throw GridMismatch("surface maps on different grids");
}

// Partial derivatives of a surface map along both grid directions.
void surface_derivatives(const SurfaceMap& m, std::vector<double>& d1, std::vector<double>& d2) {
  const int rows = m.kind == SurfaceMap::Kind::Torus ? m.n1 : m.n1 + 1;
  const int n2 = m.n2;
  d1.assign(m.values.size(), 0.0);
  d2.assign(m.values.size(), 0.0);
  for (int i = 0; i < rows; ++i) {
    const std::vector<double> row(m.values.begin() + static_cast<long>(i) * n2, m.values.begin() + static_cast<long>(i + 1) * n2);
    const std::vector<double> d = spectral_derivative(row);
    const double scale = m.kind == SurfaceMap::Kind::Torus ? 1.0 : 1.0 / kTwoPi;
    for (int j = 0; j < n2; ++j) d2[static_cast<std::size_t>(i) * n2 + j] = d[j] * scale + m.w2;
  }
  if (m.kind == SurfaceMap::Kind::Torus) {
    for (int j = 0; j < n2; ++j) {
      std::vector<double> col(m.n1);
      for (int i = 0; i < m.n1; ++i) col[i] = m.at(i, j);
      const std::vector<double> d = spectral_derivative(col);
      for (int i = 0; i < m.n1; ++i) d1[static_cast<std::size_t>(i) * n2 + j] = d[i] + m.w1;
    }
    return;
  }
  // Disk: radial fourth-order differences, reflecting through the centre.
  const int R = m.n1;
  auto value = [&](int i, int j) {
    if (i < 0) {
      i = -i;
      j = (j + n2 / 2) % n2;
    }
    return m.at(i, j);
  };
  for (int i = 0; i <= R; ++i)
    for (int j = 0; j < n2; ++j) {
      double acc = 0.0;
      if (i + 2 <= R) {
        acc = (value(i - 2, j) - 8.0 * value(i - 1, j) + 8.0 * value(i + 1, j) - value(i + 2, j)) / 12.0;
      } else {
        const Stencil s = fd4(i, R, false);
        for (int k = 0; k < 5; ++k) acc += s.weight[k] * m.at(s.index[k], j);
      }
      d1[static_cast<std::size_t>(i) * n2 + j] = acc * R;
    }
}

double integrate_rows(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b, int row0, int row1) {
  std::vector<double> a1, a2, b1, b2;
  surface_derivatives(a, a1, a2);
  surface_derivatives(b, b1, b2);
  const int n2 = a.n2;
  const bool torus = a.kind == SurfaceMap::Kind::Torus;
  const int span = row1 - row0;
  const double h1 = torus ? 1.0 / a.n1 : 1.0 / a.n1;
  const double h2 = torus ? 1.0 / n2 : kTwoPi / n2;
  std::vector<double> w;
  if (torus && span == a.n1) {
    w.assign(span, h1);
  } else {
    w = span % 2 == 0 ? simpson_weights(span, h1) : trapezoid(span);
    if (span % 2 != 0)
      for (double& x : w) x *= span * h1;
  }
  double total = 0.0;
  for (int r = 0; r < static_cast<int>(w.size()); ++r) {
    const int i = torus ? (row0 + r) % a.n1 : row0 + r;
    double inner = 0.0;
    for (int j = 0; j < n2; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n2 + j;
      Point p(2);
      p << a.values[k], b.values[k];
      Tangent u(2), v(2);
      u << a1[k], b1[k];
      v << a2[k], b2[k];
      inner += rho(p, u, v);
    }
    total += w[r] * inner * h2;
  }
  return total;
}

}  // namespace

SurfaceMap pointwise_product(const SurfaceMap& a, const SurfaceMap& b) {
  check_pair(a, b);
  SurfaceMap out = a;
  out.w1 += b.w1;
  out.w2 += b.w2;
  for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] += b.values[k];
  return out;
}

double surface_integral(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b) {
  check_pair(a, b);
  if (rho.base != Base::T2) throw InvalidArgument("surface maps take values in U(1) x U(1)");
  return integrate_rows(rho, a, b, 0, a.n1);
}

double cylinder_integral(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b, int row0, int row1) {
  check_pair(a, b);
  if (a.kind != SurfaceMap::Kind::Torus) throw InvalidArgument("cylinders are cut from a torus");
  if (row0 < 0 || row1 > a.n1 || row1 <= row0) throw InvalidArgument("bad cylinder rows");
  return integrate_rows(rho, a, b, row0, row1);
}

Complex reciprocity_cocycle(const Form2& rho, const SurfaceMap& a, const SurfaceMap& b) {
  return phase(surface_integral(rho, a, b));
}

}  // namespace gerbelab
