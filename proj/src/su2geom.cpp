#include "gerbelab/su2geom.hpp"

#include <algorithm>
#include <cmath>

#include "gerbelab/errors.hpp"

namespace gerbelab {

// ---- group basics ------------------------------------------------------------

Quat qexp(const Vec3& v) {
  const double t = v.norm();
  const double sinc = t < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t;
  return Quat(std::cos(t), sinc * v.x(), sinc * v.y(), sinc * v.z());
}

namespace {
Vec3 log_unchecked(const Quat& q) {
  const double s = q.vec().norm();
  const double t = std::atan2(s, q.w());
  if (s < 1e-12) return q.vec() / std::max(q.w(), 1e-300);
  return q.vec() * (t / s);
}
}  // namespace

Vec3 qlog(const Quat& q, double margin) {
  const double chord = std::sqrt((q.w() + 1.0) * (q.w() + 1.0) + q.vec().squaredNorm());
  if (chord < margin) throw AntipodeError("logarithm requested too close to -1");
  return log_unchecked(q);
}

Vec3 log_diff(const Quat& a, const Quat& b) { return log_unchecked(a.conjugate() * b); }

Vec3 adjoint(const Quat& g, const Vec3& v) { return (g * pure(v) * g.conjugate()).vec(); }

// ---- forms -------------------------------------------------------------------

double eval_H(const Calibration& cal, const Vec3& a, const Vec3& b, const Vec3& c) {
  return cal.c_H * a.dot(2.0 * b.cross(c));
}

namespace {

struct EulerFrame {
  Vec3 da, db, dc;  // left-trivialised chart derivatives
};

EulerFrame euler_frame(double a, double b, double c) {
  const Quat ea(std::cos(a), std::sin(a), 0, 0);
  const Quat eb(std::cos(b), 0, std::sin(b), 0);
  const Quat ec(std::cos(c), std::sin(c), 0, 0);
  const Quat q = ea * eb * ec;
  const Quat i(0, 1, 0, 0), j(0, 0, 1, 0);
  EulerFrame f;
  f.da = (q.conjugate() * i * q).vec();
  f.db = (ec.conjugate() * j * ec).vec();
  f.dc = i.vec();
  return f;
}

}  // namespace

double integrate_H(int n, double c_H) {
  if (n < 4) throw InvalidArgument("calibration grid too small");
  const Calibration cal{c_H, 1, n};
  const auto gl = gauss_legendre(n, 0.0, kPi / 2);
  // Orient the chart so that it agrees with the left-invariant frame (i,j,k).
  const EulerFrame probe = euler_frame(0.3, kPi / 4, 0.7);
  const double orient = probe.da.dot(probe.db.cross(probe.dc)) > 0 ? 1.0 : -1.0;
  const double h = kTwoPi / n;
  double total = 0.0;
  for (int ia = 0; ia < n; ++ia)
    for (const auto& [b, wb] : gl)
      for (int ic = 0; ic < n; ++ic) {
        const EulerFrame f = euler_frame(ia * h, b, ic * h);
        total += wb * eval_H(cal, f.da, f.db, f.dc);
      }
  // (a, c) -> (a + c, c - a) covers the Hopf torus twice.
  return orient * total * h * h / 2.0;
}

double eval_rho(const Calibration& cal, const Quat& g1, const Quat& g2, const TangentPair& v1,
                const TangentPair& v2) {
  (void)g1;
  const Vec3 r2 = adjoint(g2, v2.eta);
  const Vec3 r1 = adjoint(g2, v1.eta);
  return cal.s_rho * cal.c_H * (v1.xi.dot(r2) - v2.xi.dot(r1));
}

namespace {

Vec3 dexp_apply(const Vec3& a, const Vec3& x) {
  Vec3 term = x, sum = x;
  for (int k = 1; k < 40; ++k) {
    term = -2.0 * a.cross(term) / (k + 1);
    sum += term;
    if (term.norm() < 1e-18) break;
  }
  return sum;
}

Vec3 product_tangent(const Quat& g2, const Vec3& xi, const Vec3& eta) {
  return adjoint(g2.conjugate(), xi) + eta;
}

}  // namespace

double delta_rho_at(const Calibration& cal, const Quat& g1, const Quat& g2, const Quat& g3,
                    const std::array<Vec3, 3>& v, const std::array<Vec3, 3>& w) {
  const Quat g12 = g1 * g2, g23 = g2 * g3;
  const double a = eval_rho(cal, g1, g2, {v[0], v[1]}, {w[0], w[1]});
  const double b = eval_rho(cal, g12, g3, {product_tangent(g2, v[0], v[1]), v[2]},
                            {product_tangent(g2, w[0], w[1]), w[2]});
  const double c = eval_rho(cal, g2, g3, {v[1], v[2]}, {w[1], w[2]});
  const double d = eval_rho(cal, g1, g23, {v[0], product_tangent(g3, v[1], v[2])},
                            {w[0], product_tangent(g3, w[1], w[2])});
  return a + b - c - d;
}

double delta_H_at(const Calibration& cal, const Quat& g1, const Quat& g2, const std::array<Vec3, 2>& u,
                  const std::array<Vec3, 2>& v, const std::array<Vec3, 2>& w) {
  const Vec3 pu = product_tangent(g2, u[0], u[1]);
  const Vec3 pv = product_tangent(g2, v[0], v[1]);
  const Vec3 pw = product_tangent(g2, w[0], w[1]);
  return eval_H(cal, u[0], v[0], w[0]) - eval_H(cal, pu, pv, pw) + eval_H(cal, u[1], v[1], w[1]);
}

double d_rho_at(const Calibration& cal, const Quat& g1, const Quat& g2, const std::array<Vec3, 2>& u,
                const std::array<Vec3, 2>& v, const std::array<Vec3, 2>& w) {
  // rho pulled back to the exponential chart a -> (g1 e^{a0}, g2 e^{a1}),
  // where constant vector fields commute and d is a signed sum of
  // directional derivatives.
  auto chart_rho = [&](const std::array<Vec3, 2>& a, const std::array<Vec3, 2>& x, const std::array<Vec3, 2>& y) {
    const Quat p1 = g1 * qexp(a[0]);
    const Quat p2 = g2 * qexp(a[1]);
    return eval_rho(cal, p1, p2, {dexp_apply(a[0], x[0]), dexp_apply(a[1], x[1])},
                    {dexp_apply(a[0], y[0]), dexp_apply(a[1], y[1])});
  };
  auto directional = [&](const std::array<Vec3, 2>& dir, const std::array<Vec3, 2>& x,
                         const std::array<Vec3, 2>& y) {
    auto central = [&](double h) {
      const std::array<Vec3, 2> ap{h * dir[0], h * dir[1]};
      const std::array<Vec3, 2> am{-h * dir[0], -h * dir[1]};
      return (chart_rho(ap, x, y) - chart_rho(am, x, y)) / (2.0 * h);
    };
    const double h = 1e-3;
    return (4.0 * central(h) - central(2.0 * h)) / 3.0;
  };
  return directional(u, v, w) - directional(v, u, w) + directional(w, u, v);
}

DeltaDefects delta_identity_defects(int points, std::uint64_t seed, const Calibration& cal) {
  Rng rng(seed);
  auto rv = [&rng] { return Vec3(rng.normal(), rng.normal(), rng.normal()); };
  DeltaDefects out;
  for (int k = 0; k < points; ++k) {
    const Quat g1 = random_unit_quat(rng), g2 = random_unit_quat(rng), g3 = random_unit_quat(rng);
    const std::array<Vec3, 3> v{rv(), rv(), rv()}, w{rv(), rv(), rv()};
    out.delta_rho = std::max(out.delta_rho, std::abs(delta_rho_at(cal, g1, g2, g3, v, w)));
    const std::array<Vec3, 2> a{rv(), rv()}, b{rv(), rv()}, c{rv(), rv()};
    out.dH_minus_drho =
        std::max(out.dH_minus_drho, std::abs(delta_H_at(cal, g1, g2, a, b, c) - d_rho_at(cal, g1, g2, a, b, c)));
  }
  return out;
}

Calibration calibrate_H(int n) {
  if (n < 32) throw InvalidArgument("calibration needs a grid of at least 32^3");
  const double coarse = integrate_H(n, 1.0);
  const double fine = integrate_H(2 * n, 1.0);
  if (!(std::abs(coarse - fine) <= 1e-2 * std::abs(fine)) || fine <= 0.0)
    throw CalibrationDiverged("H integral changes under refinement");
  Calibration cal{1.0 / fine, 1, n};
  // The sign of rho is whichever makes Delta H = d rho hold.
  double best = 0.0;
  for (int s : {1, -1}) {
    Calibration trial = cal;
    trial.s_rho = s;
    const double d = delta_identity_defects(8, 12345, trial).dH_minus_drho;
    if (s == 1 || d < best) {
      best = d;
      cal.s_rho = s;
    }
  }
  return cal;
}

const Calibration& default_calibration() {
  static const Calibration cal = calibrate_H(48);
  return cal;
}

// ---- grids -------------------------------------------------------------------

namespace {

void check_unit_grid(const std::vector<Quat>& g) {
  for (const Quat& q : g)
    if (std::abs(q.norm() - 1.0) > 1e-10) throw InvalidArgument("grid value is not a unit quaternion");
}

bool close(const Quat& a, const Quat& b, double tol) { return (a.coeffs() - b.coeffs()).norm() <= tol; }

int collar_start(int R, double collar) {
  return static_cast<int>(std::ceil((1.0 - collar) * R - 1e-9));
}

}  // namespace

LoopSU2 DiskMap::boundary() const {
  std::vector<Quat> s(M + 1);
  for (int j = 0; j < M; ++j) s[j] = at(R, j);
  s[M] = s[0];
  return LoopSU2{std::move(s)};
}

Quat DiskMap::sample(double r, double theta) const {
  const double x = r * R;
  const int i0 = static_cast<int>(std::floor(x));
  const double f = x - i0;
  const double y = theta / kTwoPi * M;
  const int j0 = static_cast<int>(std::floor(y));
  const double g = y - j0;
  const auto wr = lagrange4(f);
  const auto wt = lagrange4(g);
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (int a = 0; a < 4; ++a) {
    if (wr[a] == 0.0) continue;
    int i = i0 - 1 + a;
    int shift = 0;
    if (i < 0) {
      i = -i;
      shift = M / 2;
    }
    i = std::min(i, R);
    for (int b = 0; b < 4; ++b) {
      if (wt[b] == 0.0) continue;
      const int j = (((j0 - 1 + b + shift) % M) + M) % M;
      acc += wr[a] * wt[b] * at(i, j).coeffs();
    }
  }
  return normalized(Quat(acc[3], acc[0], acc[1], acc[2]));
}

DiskMap DiskMap::make(int R, int M, double collar, std::vector<Quat> grid) {
  if (R < 4 || M < 8 || M % 2 != 0) throw InvalidArgument("disk grid too small or odd angular count");
  if (grid.size() != static_cast<std::size_t>(R + 1) * M) throw InvalidArgument("disk grid has wrong size");
  check_unit_grid(grid);
  DiskMap d{R, M, collar, std::move(grid)};
  for (int j = 1; j < M; ++j)
    if (!close(d.at(0, j), d.at(0, 0), 1e-12)) throw InvalidArgument("centre ring is not constant");
  const int c0 = collar_start(R, collar);
  if (R - c0 < 2) throw InvalidArgument("collar must span at least two radial steps");
  for (int i = c0; i < R; ++i)
    for (int j = 0; j < M; ++j)
      if (!close(d.at(i, j), d.at(R, j), 1e-12)) throw InvalidArgument("disk is not radially constant on its collar");
  return d;
}

DiskMap DiskMap::constant(int R, int M, const Quat& q, double collar) {
  return DiskMap{R, M, collar, std::vector<Quat>(static_cast<std::size_t>(R + 1) * M, q)};
}

SphereMap SphereMap::make(int P, int M, std::vector<Quat> grid, SphereProvenance tag) {
  if (P < 4 || M < 8 || M % 2 != 0) throw InvalidArgument("sphere grid too small or odd longitude count");
  if (grid.size() != static_cast<std::size_t>(P + 1) * M) throw InvalidArgument("sphere grid has wrong size");
  check_unit_grid(grid);
  SphereMap s{P, M, std::move(grid), tag};
  for (int j = 1; j < M; ++j)
    if (!close(s.at(0, j), s.at(0, 0), 1e-12) || !close(s.at(P, j), s.at(P, 0), 1e-12))
      throw InvalidArgument("pole ring is not a single point");
  return s;
}

// ---- Wess-Zumino action -------------------------------------------------------

namespace {

// Radial kernel of the cone integral: int_0^1 2 c_H sin^2(r p)/p^2 dr.
double cone_kernel(double p, double c_H) {
  if (p < 1e-3) {
    const double p2 = p * p;
    return c_H * (2.0 / 3.0 - 2.0 * p2 / 15.0 + 4.0 * p2 * p2 / 315.0);
  }
  return c_H * (p - std::sin(p) * std::cos(p)) / (p * p * p);
}

// Accessor for a (rows+1) x M grid whose first row is a pole or disk centre
// (reflect through it) and whose last row is either a pole (reflect) or a
// rim with a radially constant collar (clamp).
template <class T>
struct PolarField {
  const std::vector<T>* data;
  int rows;
  int M;
  bool reflect_last;
  const T& operator()(int i, int j) const {
    if (i < 0) {
      i = -i;
      j += M / 2;
    }
    if (i > rows) {
      if (reflect_last) {
        i = 2 * rows - i;
        j += M / 2;
      } else {
        i = rows;
      }
    }
    j = ((j % M) + M) % M;
    return (*data)[static_cast<std::size_t>(i) * M + j];
  }
};

std::vector<Quat> subsample(const std::vector<Quat>& g, int rows, int M, int stride) {
  const int r = rows / stride, m = M / stride;
  std::vector<Quat> out(static_cast<std::size_t>(r + 1) * m);
  for (int i = 0; i <= r; ++i)
    for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(i) * m + j] = g[static_cast<std::size_t>(i * stride) * M + j * stride];
  return out;
}

void check_stride(int rows, int M, int stride) {
  if (rows % stride != 0 || M % (2 * stride) != 0)
    throw InvalidArgument("grid not divisible for the requested refinement level");
}

// Left-trivialised fourth-order derivatives along rows (i) and columns (j).
void polar_tangents(const PolarField<Quat>& f, double h_i, double h_j, std::vector<Vec3>& d_i,
                    std::vector<Vec3>& d_j) {
  const int rows = f.rows, M = f.M;
  d_i.assign(static_cast<std::size_t>(rows + 1) * M, Vec3::Zero());
  d_j.assign(d_i.size(), Vec3::Zero());
  static const int off[4] = {-2, -1, 1, 2};
  static const double w[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  for (int i = 0; i <= rows; ++i)
    for (int j = 0; j < M; ++j) {
      const Quat& q = f(i, j);
      Vec3 a = Vec3::Zero(), b = Vec3::Zero();
      for (int k = 0; k < 4; ++k) {
        a += w[k] * log_diff(q, f(i + off[k], j));
        b += w[k] * log_diff(q, f(i, j + off[k]));
      }
      d_i[static_cast<std::size_t>(i) * M + j] = a / h_i;
      d_j[static_cast<std::size_t>(i) * M + j] = b / h_j;
    }
}

double richardson(double fine, double coarse, double tol, const char* what) {
  if (std::abs(fine - coarse) > tol) throw ResolutionError(std::string(what) + " not converged under refinement");
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

double wz_cone_integral(const SphereMap& phi, const Quat& g, const Calibration& cal, int stride) {
  check_stride(phi.P, phi.M, stride);
  const int P = phi.P / stride, M = phi.M / stride;
  std::vector<Vec3> psi(static_cast<std::size_t>(P + 1) * M);
  for (int i = 0; i <= P; ++i)
    for (int j = 0; j < M; ++j)
      psi[static_cast<std::size_t>(i) * M + j] = log_unchecked(g * phi.at(i * stride, j * stride));
  const PolarField<Vec3> f{&psi, P, M, true};
  const double hu = 1.0 / P, hl = kTwoPi / M;
  double total = 0.0;
  for (int i = 1; i < P; ++i)
    for (int j = 0; j < M; ++j) {
      const Vec3 du = (f(i - 2, j) - 8.0 * f(i - 1, j) + 8.0 * f(i + 1, j) - f(i + 2, j)) / (12.0 * hu);
      const Vec3 dl = (f(i, j - 2) - 8.0 * f(i, j - 1) + 8.0 * f(i, j + 1) - f(i, j + 2)) / (12.0 * hl);
      const Vec3& p = f(i, j);
      total += cone_kernel(p.norm(), cal.c_H) * p.dot(du.cross(dl));
    }
  return total * hu * hl;
}

Quat wz_translation(const SphereMap& phi, const WzOptions& opt) {
  auto clearance = [&phi](const Quat& g) {
    double best = 4.0;
    for (const Quat& q : phi.grid) {
      const Quat p = g * q;
      best = std::min(best, (p.w() + 1.0) * (p.w() + 1.0) + p.vec().squaredNorm());
    }
    return std::sqrt(best);
  };
  // The margin is the hard limit; cones that pass close to it converge slowly,
  // so the identity is only kept outright when it has comfortable clearance.
  const Quat id = Quat::Identity();
  double best = clearance(id);
  if (best >= kComfortableClearance) return id;
  Rng rng(opt.seed);
  Quat best_g = id;
  for (int k = 0; k < opt.attempts; ++k) {
    const Quat g = random_unit_quat(rng);
    const double c = clearance(g);
    if (c > best) {
      best = c;
      best_g = g;
    }
    if (best >= kComfortableClearance) break;
  }
  if (best < opt.margin) throw TranslationSearchFailed("no left translation keeps the map away from -1");
  return best_g;
}

double wz_action_raw(const SphereMap& phi, const Calibration& cal, const WzOptions& opt) {
  const Quat g = wz_translation(phi, opt);
  const double fine = wz_cone_integral(phi, g, cal, 1);
  const double coarse = wz_cone_integral(phi, g, cal, 2);
  return richardson(fine, coarse, opt.refine_tol, "Wess-Zumino integral");
}

double wz_action(const SphereMap& phi, const Calibration& cal, const WzOptions& opt) {
  const double s = wz_action_raw(phi, cal, opt);
  const double r = s - std::floor(s);
  return r >= 1.0 ? 0.0 : r;
}

// ---- rho integrals ----------------------------------------------------------------

namespace {

double rho_surface(const std::vector<Quat>& a, const std::vector<Quat>& b, int rows, int M, bool reflect_last,
                   double h_rows, const Calibration& cal, int stride) {
  check_stride(rows, M, stride);
  const int r = rows / stride, m = M / stride;
  const std::vector<Quat> ga = stride == 1 ? a : subsample(a, rows, M, stride);
  const std::vector<Quat> gb = stride == 1 ? b : subsample(b, rows, M, stride);
  const PolarField<Quat> fa{&ga, r, m, reflect_last}, fb{&gb, r, m, reflect_last};
  const double hi = h_rows * stride, hj = kTwoPi / m;
  std::vector<Vec3> ai, aj, bi, bj;
  polar_tangents(fa, hi, hj, ai, aj);
  polar_tangents(fb, hi, hj, bi, bj);
  double total = 0.0;
  for (int i = 0; i <= r; ++i) {
    const double wi = (i == 0 || i == r) ? 0.5 : 1.0;
    for (int j = 0; j < m; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * m + j;
      total += wi * eval_rho(cal, ga[k], gb[k], {ai[k], bi[k]}, {aj[k], bj[k]});
    }
  }
  return total * hi * hj;
}

}  // namespace

double rho_disk_integral(const DiskMap& a, const DiskMap& b, const Calibration& cal) {
  if (a.R != b.R || a.M != b.M) throw GridMismatch("disk maps on different grids");
  const double fine = rho_surface(a.grid, b.grid, a.R, a.M, false, 1.0 / a.R, cal, 1);
  const double coarse = rho_surface(a.grid, b.grid, a.R, a.M, false, 1.0 / a.R, cal, 2);
  return richardson(fine, coarse, 1e-2, "disk integral of rho");
}

double rho_sphere_integral(const SphereMap& a, const SphereMap& b, const Calibration& cal) {
  if (a.P != b.P || a.M != b.M) throw GridMismatch("sphere maps on different grids");
  const double fine = rho_surface(a.grid, b.grid, a.P, a.M, true, 1.0 / a.P, cal, 1);
  const double coarse = rho_surface(a.grid, b.grid, a.P, a.M, true, 1.0 / a.P, cal, 2);
  return richardson(fine, coarse, 1e-2, "sphere integral of rho");
}

DiskMap cone_filling(const LoopSU2& tau, int R, double collar) {
  const int M = tau.intervals();
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  for (int j = 0; j < M; ++j) mean += tau.samples[j].coeffs();
  if (mean.norm() < 1e-6) throw AntipodeError("loop has no usable cone apex");
  const Quat q0 = normalized(Quat(mean[3], mean[0], mean[1], mean[2]));
  std::vector<Vec3> arms(M);
  for (int j = 0; j < M; ++j) arms[j] = qlog(q0.conjugate() * tau.samples[j]);
  DiskMap d{R, M, collar, std::vector<Quat>(static_cast<std::size_t>(R + 1) * M)};
  const double top = 1.0 - collar;
  const int c0 = collar_start(R, collar);
  for (int i = 0; i <= R; ++i) {
    const double b = i >= c0 ? 1.0 : smooth_step(static_cast<double>(i) / R, 0.1 * top, top);
    for (int j = 0; j < M; ++j) d.at(i, j) = i >= c0 ? tau.samples[j] : q0 * qexp(b * arms[j]);
  }
  return d;
}

// ---- sphere assembly ----------------------------------------------------------------

SphereMap glue_sphere(const DiskMap& north, const DiskMap& south) {
  if (north.R != south.R || north.M != south.M) throw GridMismatch("glued disks on different grids");
  const int R = north.R, M = north.M;
  for (int j = 0; j < M; ++j)
    if (!close(north.at(R, j), south.at(R, j), kEndpointTol)) throw BoundaryMismatch("disk boundaries differ");
  SphereMap s{2 * R, M, std::vector<Quat>(static_cast<std::size_t>(2 * R + 1) * M), SphereProvenance::Glued};
  for (int i = 0; i <= 2 * R; ++i)
    for (int j = 0; j < M; ++j) s.at(i, j) = i <= R ? north.at(i, j) : south.at(2 * R - i, j);
  return s;
}

SphereMap trisect_sphere(const DiskMap& d12, const DiskMap& d23, const DiskMap& d13, int P, int M) {
  const int m = d12.M;
  if (d23.M != m || d13.M != m || d23.R != d12.R || d13.R != d12.R) throw GridMismatch("trisected disks differ in grid");
  // Rim consistency: first halves of 12 and 13 carry gamma_1, the second half
  // of 12 is the first half of 23 reversed, and 13, 23 share their second half.
  const int R = d12.R;
  for (int j = 0; j <= m / 2; ++j) {
    if (!close(d12.at(R, j), d13.at(R, j), kEndpointTol))
      throw SeamMismatch("disks 12 and 13 disagree along the first path");
    const int k = (m - j) % m;
    if (!close(d12.at(R, k), d23.at(R, j), kEndpointTol))
      throw SeamMismatch("disks 12 and 23 disagree along the second path");
    if (!close(d13.at(R, k), d23.at(R, k), kEndpointTol))
      throw SeamMismatch("disks 13 and 23 disagree along the third path");
  }
  if (P == 0) P = 2 * R;
  if (M == 0) M = 3 * m / 2;
  if (M % 3 != 0 || M % 4 != 0) throw InvalidArgument("trisection needs a longitude count divisible by 12");
  SphereMap s{P, M, std::vector<Quat>(static_cast<std::size_t>(P + 1) * M), SphereProvenance::Trisected};
  const int third = M / 3;
  for (int i = 0; i <= P; ++i) {
    const double th = kPi * i / P;
    for (int j = 0; j < M; ++j) {
      const int sector = j / third;
      const double u = static_cast<double>(j - sector * third) / third;
      const double sp = sector == 1 ? kPi * u : kPi * (1.0 - u);
      const double X = -std::cos(th), Y = std::sin(th) * std::cos(sp);
      const double r = std::min(1.0, std::hypot(X, Y));
      double ang = std::atan2(Y, X);
      if (ang < 0) ang += kTwoPi;
      const DiskMap& d = sector == 0 ? d12 : (sector == 1 ? d13 : d23);
      s.at(i, j) = d.sample(r, ang);
    }
  }
  for (int j = 1; j < M; ++j) {
    s.at(0, j) = s.at(0, 0);
    s.at(P, j) = s.at(P, 0);
  }
  return s;
}

SphereMap cylinder_sphere(const DiskMap& d0, const DiskMap& d1, const Homotopy& h, int rows) {
  if (d0.R != d1.R || d0.M != d1.M || h.N != d0.M) throw GridMismatch("cylinder pieces differ in grid");
  const int R = d0.R, M = d0.M;
  for (int j = 0; j < M; ++j) {
    if (!close(d0.at(R, j), h.at(0, j), kEndpointTol)) throw BoundaryMismatch("first cap does not match h(0)");
    if (!close(d1.at(R, j), h.at(h.T, j), kEndpointTol)) throw BoundaryMismatch("second cap does not match h(1)");
  }
  const int C = rows > 0 ? rows : R;
  const int P = 2 * R + C;
  SphereMap s{P, M, std::vector<Quat>(static_cast<std::size_t>(P + 1) * M), SphereProvenance::Cylinder};
  for (int i = 0; i <= R; ++i)
    for (int j = 0; j < M; ++j) s.at(i, j) = d0.at(i, (M - j) % M);
  for (int k = 1; k < C; ++k) {
    const double t = smooth_step(static_cast<double>(k) / C, 0.0, 1.0);
    const std::vector<Quat> row = h.row_at(t);
    for (int j = 0; j < M; ++j) s.at(R + k, j) = row[(M - j) % M];
  }
  for (int i = R + C; i <= P; ++i)
    for (int j = 0; j < M; ++j) s.at(i, j) = d1.at(P - i, (M - j) % M);
  return s;
}

}  // namespace gerbelab
