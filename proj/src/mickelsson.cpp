#include "gerbelab/mickelsson.hpp"

#include <cmath>

#include "gerbelab/errors.hpp"

namespace gerbelab {

namespace {

bool same_grid(const DiskMap& a, const DiskMap& b) { return a.R == b.R && a.M == b.M; }

bool identical(const DiskMap& a, const DiskMap& b) {
  if (!same_grid(a, b)) return false;
  for (std::size_t k = 0; k < a.grid.size(); ++k)
    if (a.grid[k].coeffs() != b.grid[k].coeffs()) return false;
  return true;
}

void check_boundaries(const DiskMap& a, const DiskMap& b) {
  if (!same_grid(a, b)) throw GridMismatch("disk maps on different grids");
  for (int j = 0; j < a.M; ++j)
    if ((a.at(a.R, j).coeffs() - b.at(b.R, j).coeffs()).norm() > kEndpointTol)
      throw BoundaryMismatch("elements lie over different loops");
}

bool is_identity(const Quat& q, double tol) { return (q.coeffs() - Quat::Identity().coeffs()).norm() <= tol; }

bool inside(double t, const Support& s) { return t > s.a && t < s.b; }

}  // namespace

MickElement MickElement::make(DiskMap phi, Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw InvalidArgument("phase is not a unit complex number");
  DiskMap checked = DiskMap::make(phi.R, phi.M, phi.collar, std::move(phi.grid));
  return MickElement{std::move(checked), z};
}

LoopSU2 boundary(const MickElement& e) { return e.phi.boundary(); }

Complex equivalence_defect(const MickElement& e1, const MickElement& e2, const Calibration& cal) {
  check_boundaries(e1.phi, e2.phi);
  // A disk glued to itself is a fold map, whose Wess-Zumino action vanishes.
  const double s = identical(e1.phi, e2.phi) ? 0.0 : wz_action(glue_sphere(e1.phi, e2.phi), cal);
  return e1.z / (e2.z * phase(s));
}

DiskMap disk_product(const DiskMap& a, const DiskMap& b) {
  if (!same_grid(a, b)) throw GridMismatch("disk maps on different grids");
  DiskMap out = a;
  out.collar = std::max(a.collar, b.collar);
  for (std::size_t k = 0; k < a.grid.size(); ++k) out.grid[k] = a.grid[k] * b.grid[k];
  return out;
}

MickElement product(const MickElement& e1, const MickElement& e2, const Calibration& cal) {
  const double r = rho_disk_integral(e1.phi, e2.phi, cal);
  return MickElement{disk_product(e1.phi, e2.phi), e1.z * e2.z * phase(-r)};
}

MickElement fusion(const MickElement& e12, const MickElement& e23, const DiskMap& phi13, const Calibration& cal) {
  const SphereMap psi = trisect_sphere(e12.phi, e23.phi, phi13);
  return MickElement{phi13, e12.z * e23.z * phase(-wz_action(psi, cal))};
}

MickElement parallel_transport(const MickElement& e0, const Homotopy& h, const DiskMap& phi1,
                               const Calibration& cal) {
  const SphereMap s = cylinder_sphere(e0.phi, phi1, h);
  return MickElement{phi1, e0.z * phase(wz_action(s, cal))};
}

MickElement thin_transport(const MickElement& e0, const Homotopy& h, const DiskMap& phi1, const Calibration& cal,
                           double thin_tol) {
  const double d = rank_defect(h);
  if (d > thin_tol) throw NotThin("homotopy has rank two (defect " + std::to_string(d) + ")");
  return parallel_transport(e0, h, phi1, cal);
}

MickElement rotate_action(const MickElement& e, double turns) {
  const DiskMap& d = e.phi;
  DiskMap out = d;
  for (int i = 1; i <= d.R; ++i) {
    std::vector<Quat> ring(d.M + 1);
    for (int j = 0; j < d.M; ++j) ring[j] = d.at(i, j);
    ring[d.M] = ring[0];
    const LoopSU2 r = rotate(LoopSU2{std::move(ring)}, turns);
    for (int j = 0; j < d.M; ++j) out.at(i, j) = r.samples[j];
  }
  return MickElement{std::move(out), e.z};
}

MickElement canonical_section(const PathSU2& gamma, int R) {
  const int n = gamma.intervals();
  const int M = 2 * n;
  const QuatSpline s(gamma.samples, Spline::Kind::Natural);
  const LoopSU2 rim = fuse(gamma, gamma);
  DiskMap d{R, M, 0.125, std::vector<Quat>(static_cast<std::size_t>(R + 1) * M)};
  const double top = 1.0 - d.collar;
  const int c0 = static_cast<int>(std::ceil(top * R - 1e-9));
  for (int i = 0; i <= R; ++i) {
    const double r = static_cast<double>(i) / R;
    // Stretch the radius to reach the rim before the collar.
    const double rr = i >= c0 ? 1.0 : r + smooth_step(r, 0.3 * top, top) * (1.0 - r);
    for (int j = 0; j < M; ++j) {
      if (i >= c0) {
        d.at(i, j) = rim.samples[j];
        continue;
      }
      const double x = std::clamp(rr * std::cos(kTwoPi * j / M), -1.0, 1.0);
      d.at(i, j) = i == 0 ? s(0.5) : s(std::acos(x) / kPi);
    }
  }
  return MickElement{std::move(d), Complex(1.0, 0.0)};
}

LoopSU2 concat_loops(const LoopSU2& tau1, const LoopSU2& tau2) {
  const int n = tau1.intervals();
  if (tau2.intervals() != n) throw GridMismatch("concatenated loops must share a grid");
  if ((tau1.samples[0].coeffs() - tau2.samples[0].coeffs()).norm() > kEndpointTol)
    throw EndpointMismatch("concatenated loops must share the base point");
  std::vector<Quat> v(2 * n + 1);
  for (int j = 0; j <= n; ++j) v[j] = tau1.samples[j];
  for (int j = n + 1; j <= 2 * n; ++j) v[j] = tau2.samples[j - n];
  v[2 * n] = v[0];
  return LoopSU2{std::move(v)};
}

MickElement concat_lift(const MickElement& p1, const MickElement& p2, const SmoothingMap& phi, const Calibration& cal,
                        int T) {
  const LoopSU2 tau1 = boundary(p1), tau2 = boundary(p2);
  const int n = tau1.intervals();
  if (tau2.intervals() != n || p1.phi.R != p2.phi.R) throw GridMismatch("concatenated elements must share a grid");
  if (phi.intervals() != n) throw GridMismatch("smoothing map must live on the loop grid");
  if ((tau1.samples[0].coeffs() - tau2.samples[0].coeffs()).norm() > kEndpointTol)
    throw EndpointMismatch("loops do not share their base point");
  const int R = p1.phi.R;
  const Quat g = tau1.samples[0];
  const QuatSpline s1(tau1.samples, Spline::Kind::Periodic), s2(tau2.samples, Spline::Kind::Periodic);

  // Paths tau1 o phi, constant g, and the reverse of tau2 o phi.
  std::vector<Quat> a(n + 1), b(n + 1, g), c(n + 1);
  for (int j = 0; j <= n; ++j) {
    a[j] = s1(phi.values[j]);
    c[j] = s2(phi.values[n - j]);
  }
  for (int j = 0; j <= phi.collar; ++j) {
    a[j] = g;
    a[n - j] = g;
    c[j] = g;
    c[n - j] = g;
  }
  const PathSU2 pa{a, phi.collar}, pb{b, n / 2}, pc{c, phi.collar};
  const LoopSU2 a1 = fuse(pa, pb), a2 = fuse(pb, pc), a13 = fuse(pa, pc);

  // Regrid the input loops onto 2n intervals so everything shares one grid.
  auto doubled = [n](const LoopSU2& t) {
    std::vector<double> at(2 * n + 1);
    for (int j = 0; j <= 2 * n; ++j) at[j] = static_cast<double>(j) / (2 * n);
    std::vector<Quat> v(2 * n + 1);
    const QuatSpline s(t.samples, Spline::Kind::Periodic);
    for (int j = 0; j <= 2 * n; ++j) v[j] = j % 2 == 0 ? t.samples[j / 2] : s(at[j]);
    return LoopSU2{std::move(v)};
  };
  const int M = 2 * n;
  auto transport = [&](const MickElement& p, const QuatSpline& s, const LoopSU2& target,
                       const std::function<double(double)>& psi) {
    const LoopSU2 start = doubled(boundary(p));
    Homotopy h = Homotopy::from_function(T, M, [&](double t, double z) { return s((1.0 - t) * z + t * psi(z)); });
    for (int j = 0; j <= M; ++j) {
      h.at(0, j) = start.samples[j];
      h.at(T, j) = target.samples[j];
    }
    // Re-represent p by the cone over its loop, then move to the finer grid.
    const Complex z = equivalence_defect(p, MickElement{cone_filling(boundary(p), R), 1.0}, cal);
    return thin_transport(MickElement{cone_filling(start, R), z}, h, cone_filling(target, R), cal);
  };
  const MickElement q1 = transport(p1, s1, a1, [&phi](double z) { return z <= 0.5 ? phi.at(2.0 * z) : 1.0; });
  const MickElement q2 = transport(p2, s2, a2, [&phi](double z) { return z <= 0.5 ? 0.0 : phi.at(2.0 * z - 1.0); });
  const MickElement fused = fusion(q1, q2, cone_filling(a13, R), cal);

  // Move from tau1 o phi u tau2 o phi to the concatenation.
  const LoopSU2 con = concat_loops(tau1, tau2);
  auto con_at = [&](double x) { return x <= 0.5 ? s1(2.0 * x) : s2(2.0 * x - 1.0); };
  auto psi = [&phi](double z) { return z <= 0.5 ? 0.5 * phi.at(2.0 * z) : 0.5 + 0.5 * phi.at(2.0 * z - 1.0); };
  Homotopy h = Homotopy::from_function(T, M, [&](double t, double z) { return con_at((1.0 - t) * psi(z) + t * z); });
  for (int j = 0; j <= M; ++j) {
    h.at(0, j) = a13.samples[j];
    h.at(T, j) = con.samples[j];
  }
  return thin_transport(fused, h, cone_filling(con, R), cal);
}

Complex commutator_defect(const MickElement& p1, const Support& s1, const MickElement& p2, const Support& s2,
                          const Calibration& cal) {
  const bool overlap = s1.a < s2.b && s2.a < s1.b;
  const LoopSU2 t1 = boundary(p1), t2 = boundary(p2);
  const int n = t1.intervals();
  bool same = t1.samples.size() == t2.samples.size();
  for (std::size_t k = 0; same && k < t1.samples.size(); ++k) same = t1.samples[k].coeffs() == t2.samples[k].coeffs();
  if (overlap && !same) throw SupportOverlap("declared supports intersect");
  for (int j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / n;
    if (!inside(t, s1) && !is_identity(t1.samples[j], kSupportTol))
      throw SupportOverlap("first loop is not 1 off its support");
    if (!inside(t, s2) && !is_identity(t2.samples[j], kSupportTol))
      throw SupportOverlap("second loop is not 1 off its support");
  }
  return equivalence_defect(product(p1, p2, cal), product(p2, p1, cal), cal);
}

double splitting_central_component(const std::vector<double>& f, const Vec3& xi0, double step, const Calibration& cal,
                                   int R) {
  const int M = static_cast<int>(f.size());
  if (M < 8 || M % 4 != 0) throw InvalidArgument("loop needs a multiple of four samples");
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  const double collar = 0.125;
  const double top = 1.0 - collar;
  const int T = 16;
  auto phase_at = [&](double t) {
    DiskMap target{R, M, collar, std::vector<Quat>(static_cast<std::size_t>(R + 1) * M)};
    for (int i = 0; i <= R; ++i) {
      const double b = smooth_step(static_cast<double>(i) / R, 0.2 * top, top);
      for (int j = 0; j < M; ++j) target.at(i, j) = qexp(t * b * f[j] * xi0);
    }
    Homotopy h{T, M, std::vector<Quat>(static_cast<std::size_t>(T + 1) * (M + 1)), true, false};
    for (int i = 0; i <= T; ++i)
      for (int j = 0; j <= M; ++j) h.at(i, j) = qexp((static_cast<double>(i) / T) * t * f[j % M] * xi0);
    const MickElement unit{DiskMap::constant(R, M, Quat::Identity(), collar), 1.0};
    const MickElement moved = thin_transport(unit, h, target, cal);
    return turns_of(moved.z);
  };
  auto derivative = [&](double s) { return (phase_at(s) - phase_at(-s)) / (2.0 * s); };
  const double coarse = derivative(step), fine = derivative(0.5 * step);
  if (std::abs(coarse - fine) > 0.1 * std::abs(fine) + 1e-9)
    throw StepTooLarge("derivative estimates at step and step/2 disagree");
  return fine;
}

PwDefect polyakov_wiegmann_defect(const SphereMap& a, const SphereMap& b, const Calibration& cal) {
  if (a.P != b.P || a.M != b.M) throw GridMismatch("sphere maps on different grids");
  SphereMap ab = a;
  for (std::size_t k = 0; k < a.grid.size(); ++k) ab.grid[k] = a.grid[k] * b.grid[k];
  const double lhs = wz_action(a, cal) + wz_action(b, cal);
  const double rhs = wz_action(ab, cal) + rho_sphere_integral(a, b, cal);
  const Complex ratio = phase(lhs) / phase(rhs);
  return PwDefect{std::abs(ratio - 1.0), turns_of(ratio)};
}

}  // namespace gerbelab
