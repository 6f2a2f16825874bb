#include <gtest/gtest.h>

#include <cmath>

#include "gerbelab/errors.hpp"
#include "gerbelab/mickelsson.hpp"
#include "gerbelab/probes.hpp"
#include "gerbelab/su2geom.hpp"

using namespace gerbelab;

namespace {

const Calibration& cal() { return default_calibration(); }

constexpr int kR = 32;

double qdist(const Quat& a, const Quat& b) { return (a.coeffs() - b.coeffs()).norm(); }
double off(const Complex& w) { return std::abs(w - 1.0); }

MickElement random_element(Rng& rng, const LoopSU2& tau, int R = kR) {
  return MickElement{perturb_disk(cone_filling(tau, R), rng), phase(rng.uniform())};
}

MickElement equivalent_copy(const MickElement& e, Rng& rng) {
  DiskMap other = perturb_disk(e.phi, rng);
  const double s = wz_action(glue_sphere(e.phi, other), cal());
  return MickElement{std::move(other), e.z * std::conj(phase(s))};
}

struct Paths {
  Quat x, y;
  std::vector<PathSU2> g;
};

Paths random_paths(Rng& rng, int count, int n) {
  Paths s;
  s.x = random_unit_quat(rng);
  s.y = s.x * qexp(Vec3(rng.normal(), rng.normal(), rng.normal()) * 0.4);
  for (int k = 0; k < count; ++k) s.g.push_back(random_path_su2(rng, n, s.x, s.y));
  return s;
}

PathSU2 path_product(const PathSU2& a, const PathSU2& b) {
  std::vector<Quat> v(a.samples.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.samples[j] * b.samples[j];
  return PathSU2{std::move(v), std::min(a.collar, b.collar)};
}

MickElement over(Rng& rng, const PathSU2& a, const PathSU2& b) { return random_element(rng, fuse(a, b)); }

DiskMap filling(Rng& rng, const LoopSU2& tau) { return perturb_disk(cone_filling(tau, kR), rng); }

void pin_ends(Homotopy& h, const LoopSU2& a, const LoopSU2& b) {
  for (int j = 0; j <= h.N; ++j) {
    h.at(0, j) = a.samples[j];
    h.at(h.T, j) = b.samples[j];
  }
}

LoopSU2 loop_through(const LoopSU2& tau, const std::function<double(double)>& psi) {
  const int n = tau.intervals();
  std::vector<Quat> v(n + 1);
  for (int j = 0; j < n; ++j) v[j] = tau.at(psi(static_cast<double>(j) / n));
  v[n] = v[0];
  return LoopSU2{std::move(v)};
}

// gamma o psi_t with psi_t(s) = s + t a bump(s) sin(2 pi s) / (2 pi), exact on the collars.
PathSU2 repath(const PathSU2& g, double t, double a) {
  const int n = g.intervals();
  const double w = static_cast<double>(g.collar) / n;
  std::vector<Quat> v(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double s = static_cast<double>(j) / n;
    if (j <= g.collar || t == 0.0)
      v[j] = j <= g.collar ? g.samples.front() : g.samples[j];
    else if (j >= n - g.collar)
      v[j] = g.samples.back();
    else
      v[j] = g.at(s + t * a * smooth_bump(s, w, 1.0 - w) * std::sin(kTwoPi * s) / kTwoPi);
  }
  return PathSU2{std::move(v), g.collar};
}

// ---- boundary and equivalence ----

TEST(Boundary, ConstantDiskGivesConstantLoop) {
  const Quat q = qexp(Vec3(0.3, -0.2, 0.5));
  const LoopSU2 b = boundary(MickElement{DiskMap::constant(kR, 64, q), 1.0});
  ASSERT_EQ(b.intervals(), 64);
  for (const Quat& s : b.samples) EXPECT_LT(qdist(s, q), 1e-15);
}

TEST(MickElement, RejectsNonUnitPhase) { EXPECT_THROW(MickElement::make(DiskMap::constant(8, 16, Quat::Identity()), 1.1), Error); }

TEST(Equivalence, Reflexive) {
  Rng rng(11);
  const MickElement e = random_element(rng, random_loop_su2(rng, 128));
  EXPECT_LT(off(equivalence_defect(e, e, cal())), 1e-3);
}

TEST(Equivalence, PhaseShiftIsDetected) {
  Rng rng(12);
  const MickElement e = random_element(rng, random_loop_su2(rng, 128));
  const Complex w = phase(0.3);
  const Complex d = equivalence_defect(e, MickElement{e.phi, e.z * w}, cal());
  EXPECT_LT(std::abs(d - std::conj(w)), 1e-3);
}

TEST(Equivalence, DefinitionalRoundTrip) {
  Rng rng(13);
  const LoopSU2 tau = random_loop_su2(rng, 128);
  const DiskMap a = filling(rng, tau), b = filling(rng, tau);
  const double s = wz_action(glue_sphere(a, b), cal());
  EXPECT_LT(off(equivalence_defect(MickElement{a, 1.0}, MickElement{b, std::conj(phase(s))}, cal())), 2e-3);
}

TEST(Equivalence, DifferentBoundariesThrow) {
  Rng rng(14);
  const MickElement a = random_element(rng, random_loop_su2(rng, 64)), b = random_element(rng, random_loop_su2(rng, 64));
  EXPECT_THROW(equivalence_defect(a, b, cal()), BoundaryMismatch);
}

// ---- product ----

TEST(Product, IdentityIsUnit) {
  Rng rng(21);
  const MickElement e = random_element(rng, random_loop_su2(rng, 128));
  const MickElement p = product(e, MickElement{DiskMap::constant(kR, 128, Quat::Identity()), 1.0}, cal());
  EXPECT_LT(off(equivalence_defect(p, e, cal())), 1e-3);
  EXPECT_LT(std::abs(p.z - e.z), 1e-12);
}

TEST(Product, Associative) {
  Rng rng(22);
  for (int k = 0; k < 2; ++k) {
    const MickElement a = random_element(rng, random_loop_su2(rng, 128));
    const MickElement b = random_element(rng, random_loop_su2(rng, 128));
    const MickElement c = random_element(rng, random_loop_su2(rng, 128));
    const Complex d =
        equivalence_defect(product(product(a, b, cal()), c, cal()), product(a, product(b, c, cal()), cal()), cal());
    EXPECT_LT(off(d), 5e-3);
  }
}

TEST(Product, WellDefinedOnClasses) {
  Rng rng(23);
  for (int k = 0; k < 2; ++k) {
    const MickElement a = random_element(rng, random_loop_su2(rng, 128));
    const MickElement b = random_element(rng, random_loop_su2(rng, 128));
    const MickElement a2 = equivalent_copy(a, rng), b2 = equivalent_copy(b, rng);
    EXPECT_LT(off(equivalence_defect(product(a, b, cal()), product(a2, b2, cal()), cal())), 5e-3);
  }
}

TEST(Product, ProjectionIsHomomorphism) {
  Rng rng(24);
  const MickElement a = random_element(rng, random_loop_su2(rng, 64));
  const MickElement b = random_element(rng, random_loop_su2(rng, 64));
  const LoopSU2 ab = boundary(product(a, b, cal())), pa = boundary(a), pb = boundary(b);
  for (int j = 0; j <= 64; ++j) EXPECT_LT(qdist(ab.samples[j], pa.samples[j] * pb.samples[j]), 1e-15);
}

TEST(Product, PhasesAreCentral) {
  Rng rng(25);
  const MickElement e = random_element(rng, random_loop_su2(rng, 64));
  const Complex w = phase(0.37);
  const MickElement c{DiskMap::constant(kR, 64, Quat::Identity()), w};
  EXPECT_LT(std::abs(product(e, c, cal()).z - e.z * w), 1e-12);
  EXPECT_LT(std::abs(product(c, e, cal()).z - e.z * w), 1e-12);
}

// ---- fusion ----

TEST(Fusion, IndependentOfFilling) {
  Rng rng(31);
  const Paths s = random_paths(rng, 3, 64);
  const MickElement p12 = over(rng, s.g[0], s.g[1]), p23 = over(rng, s.g[1], s.g[2]);
  const LoopSU2 l13 = fuse(s.g[0], s.g[2]);
  const Complex d = equivalence_defect(fusion(p12, p23, filling(rng, l13), cal()),
                                       fusion(p12, p23, filling(rng, l13), cal()), cal());
  EXPECT_LT(off(d), 5e-3);
}

TEST(Fusion, Associative) {
  Rng rng(32);
  const Paths s = random_paths(rng, 4, 64);
  const auto& g = s.g;
  const MickElement p12 = over(rng, g[0], g[1]), p23 = over(rng, g[1], g[2]), p34 = over(rng, g[2], g[3]);
  const DiskMap f13 = filling(rng, fuse(g[0], g[2])), f24 = filling(rng, fuse(g[1], g[3]));
  const DiskMap f14 = filling(rng, fuse(g[0], g[3]));
  const MickElement left = fusion(fusion(p12, p23, f13, cal()), p34, f14, cal());
  const MickElement right = fusion(p12, fusion(p23, p34, f24, cal()), f14, cal());
  EXPECT_LT(off(equivalence_defect(left, right, cal())), 5e-3);
}

TEST(Fusion, Multiplicative) {
  Rng rng(33);
  const Paths s = random_paths(rng, 3, 64), t = random_paths(rng, 3, 64);
  const MickElement p12 = over(rng, s.g[0], s.g[1]), p23 = over(rng, s.g[1], s.g[2]);
  const MickElement q12 = over(rng, t.g[0], t.g[1]), q23 = over(rng, t.g[1], t.g[2]);
  const DiskMap f13 = filling(rng, fuse(s.g[0], s.g[2])), e13 = filling(rng, fuse(t.g[0], t.g[2]));
  const MickElement lhs = fusion(product(p12, q12, cal()), product(p23, q23, cal()), disk_product(f13, e13), cal());
  const MickElement rhs = product(fusion(p12, p23, f13, cal()), fusion(q12, q23, e13, cal()), cal());
  EXPECT_LT(off(equivalence_defect(lhs, rhs, cal())), 5e-3);
}

TEST(Fusion, EqualsProductAtBasePoint) {
  Rng rng(34);
  const Quat one = Quat::Identity();
  const PathSU2 c = random_path_su2(rng, 64, one, one, 0.0);
  const PathSU2 l1 = random_path_su2(rng, 64, one, one), l2 = random_path_su2(rng, 64, one, one);
  const MickElement a = over(rng, l1, c), b = over(rng, c, l2);
  const Complex d = equivalence_defect(product(a, b, cal()), fusion(a, b, disk_product(a.phi, b.phi), cal()), cal());
  EXPECT_LT(off(d), 5e-3);
}

TEST(Fusion, SeamMismatchThrows) {
  Rng rng(35);
  const Paths s = random_paths(rng, 4, 64);
  const MickElement p12 = over(rng, s.g[0], s.g[1]), p23 = over(rng, s.g[3], s.g[2]);
  EXPECT_THROW(fusion(p12, p23, filling(rng, fuse(s.g[0], s.g[2])), cal()), SeamMismatch);
}

// ---- transport ----

struct TransportSetup {
  LoopSU2 tau, t1, t2;
  std::function<double(double)> psi1, psi2;
};

TransportSetup transport_setup(Rng& rng, int n) {
  TransportSetup s;
  s.tau = random_loop_su2(rng, n, 0.5, 2);
  const double a1 = rng.uniform(-0.8, 0.8), a2 = rng.uniform(-0.8, 0.8);
  s.psi1 = [a1](double z) { return z + a1 * std::sin(kTwoPi * z) / (2.0 * kTwoPi); };
  s.psi2 = [a2](double z) { return z + a2 * std::sin(2.0 * kTwoPi * z) / (4.0 * kTwoPi); };
  s.t1 = loop_through(s.tau, s.psi1);
  s.t2 = loop_through(s.tau, s.psi2);
  return s;
}

Homotopy thin_family(const LoopSU2& tau, const std::function<double(double)>& from,
                     const std::function<double(double)>& to, const LoopSU2& a, const LoopSU2& b, int T = 32) {
  Homotopy h = Homotopy::from_function(T, tau.intervals(), [&](double t, double z) {
    const double w = smooth_step(t, 0.0, 1.0);
    return tau.at((1.0 - w) * from(z) + w * to(z));
  });
  pin_ends(h, a, b);
  return h;
}

Homotopy stack(const Homotopy& a, const Homotopy& b) {
  Homotopy h{a.T + b.T, a.N, std::vector<Quat>(static_cast<std::size_t>(a.T + b.T + 1) * (a.N + 1)), true, false};
  for (int i = 0; i <= a.T; ++i)
    for (int j = 0; j <= a.N; ++j) h.at(i, j) = a.at(i, j);
  for (int i = 1; i <= b.T; ++i)
    for (int j = 0; j <= a.N; ++j) h.at(a.T + i, j) = b.at(i, j);
  return h;
}

const auto identity_map = [](double z) { return z; };

TEST(ThinTransport, ConstantHomotopyIsIdentity) {
  Rng rng(41);
  const LoopSU2 tau = random_loop_su2(rng, 128);
  const MickElement e = random_element(rng, tau);
  Homotopy still = Homotopy::from_function(16, 128, [&](double, double z) { return tau.at(z); });
  pin_ends(still, tau, tau);
  EXPECT_LT(off(equivalence_defect(thin_transport(e, still, e.phi, cal()), e, cal())), 1e-3);
}

TEST(ThinTransport, Cocycle) {
  Rng rng(42);
  const TransportSetup s = transport_setup(rng, 128);
  const MickElement e = random_element(rng, s.tau);
  const DiskMap d1 = filling(rng, s.t1), d2 = filling(rng, s.t2);
  const Homotopy h1 = thin_family(s.tau, identity_map, s.psi1, s.tau, s.t1);
  const Homotopy h2 = thin_family(s.tau, s.psi1, s.psi2, s.t1, s.t2);
  const MickElement step = thin_transport(thin_transport(e, h1, d1, cal()), h2, d2, cal());
  EXPECT_LT(off(equivalence_defect(step, thin_transport(e, stack(h1, h2), d2, cal()), cal())), 5e-3);
}

TEST(ThinTransport, IndependentOfThinPath) {
  Rng rng(43);
  const TransportSetup s = transport_setup(rng, 128);
  const MickElement e = random_element(rng, s.tau);
  const DiskMap d2 = filling(rng, s.t2);
  const Homotopy direct = thin_family(s.tau, identity_map, s.psi2, s.tau, s.t2);
  const Homotopy detour = stack(thin_family(s.tau, identity_map, s.psi1, s.tau, s.t1),
                                thin_family(s.tau, s.psi1, s.psi2, s.t1, s.t2));
  EXPECT_LT(off(equivalence_defect(thin_transport(e, direct, d2, cal()), thin_transport(e, detour, d2, cal()), cal())),
            5e-3);
}

// tau(z) exp(sin(2 pi t) u(z) + (1 - cos(2 pi t)) v(z)): a closed homotopy of rank two.
Homotopy rank_two_torus(const LoopSU2& tau, const std::function<double(double)>& time, int T) {
  Homotopy h = Homotopy::from_function(T, tau.intervals(), [&](double t, double z) {
    const double a = kTwoPi * time(t), c = kTwoPi * z;
    const Vec3 u(0.5 * std::cos(c), 0.4 * std::sin(c), 0.1), v(0.1, 0.3 * std::cos(c), 0.4 * std::sin(c));
    return tau.at(z) * qexp(std::sin(a) * u + (1.0 - std::cos(a)) * v);
  });
  pin_ends(h, tau, tau);
  return h;
}

TEST(ThinTransport, RankTwoHomotopyIsNotThin) {
  Rng rng(44);
  const LoopSU2 tau = random_loop_su2(rng, 128);
  const MickElement e = random_element(rng, tau);
  EXPECT_THROW(thin_transport(e, rank_two_torus(tau, identity_map, 32), e.phi, cal()), NotThin);
}

TEST(ParallelTransport, AgreesWithThinTransport) {
  Rng rng(45);
  const TransportSetup s = transport_setup(rng, 128);
  const MickElement e = random_element(rng, s.tau);
  const DiskMap d1 = filling(rng, s.t1);
  const Homotopy h = thin_family(s.tau, identity_map, s.psi1, s.tau, s.t1);
  EXPECT_EQ(parallel_transport(e, h, d1, cal()).z, thin_transport(e, h, d1, cal()).z);
}

TEST(ParallelTransport, HolonomyIsReparameterizationInvariant) {
  Rng rng(46);
  const LoopSU2 tau = random_loop_su2(rng, 128, 0.5);
  const MickElement e = random_element(rng, tau);
  auto slow = [](double t) { return t + 0.6 * std::sin(kTwoPi * t) / kTwoPi; };
  const Complex h1 = parallel_transport(e, rank_two_torus(tau, identity_map, 64), e.phi, cal()).z / e.z;
  const Complex h2 = parallel_transport(e, rank_two_torus(tau, slow, 64), e.phi, cal()).z / e.z;
  EXPECT_GT(off(h1), 1e-2);  // the holonomy is not trivial
  EXPECT_LT(std::abs(h1 - h2), 5e-3);
}

TEST(TransportFusion, Commute) {
  Rng rng(47);
  const int n = 128, T = 48;
  const Paths s = random_paths(rng, 3, n);
  const double a = 0.5;
  auto family = [&](int i, int j) {
    Homotopy h{T, 2 * n, std::vector<Quat>(static_cast<std::size_t>(T + 1) * (2 * n + 1)), true, false};
    for (int r = 0; r <= T; ++r) {
      const LoopSU2 row = fuse(repath(s.g[i], static_cast<double>(r) / T, a), repath(s.g[j], static_cast<double>(r) / T, a));
      for (int c = 0; c <= 2 * n; ++c) h.at(r, c) = row.samples[c];
    }
    return h;
  };
  const MickElement p12 = over(rng, s.g[0], s.g[1]), p23 = over(rng, s.g[1], s.g[2]);
  const DiskMap f13 = filling(rng, fuse(s.g[0], s.g[2]));
  std::vector<PathSU2> g1;
  for (const auto& g : s.g) g1.push_back(repath(g, 1.0, a));
  const DiskMap e12 = filling(rng, fuse(g1[0], g1[1])), e23 = filling(rng, fuse(g1[1], g1[2]));
  const DiskMap e13 = filling(rng, fuse(g1[0], g1[2]));

  const MickElement moved_then_fused =
      fusion(thin_transport(p12, family(0, 1), e12, cal()), thin_transport(p23, family(1, 2), e23, cal()), e13, cal());
  const MickElement fused_then_moved = thin_transport(fusion(p12, p23, f13, cal()), family(0, 2), e13, cal());
  EXPECT_LT(off(equivalence_defect(moved_then_fused, fused_then_moved, cal())), 5e-3);
}

// ---- rotation ----

TEST(Rotate, ZeroAndFullTurnAreIdentity) {
  Rng rng(51);
  const MickElement e = random_element(rng, random_loop_su2(rng, 64));
  const MickElement r0 = rotate_action(e, 0.0), r1 = rotate_action(e, 1.0);
  for (std::size_t k = 0; k < e.phi.grid.size(); ++k) {
    EXPECT_LT(qdist(r0.phi.grid[k], e.phi.grid[k]), 1e-14);
    EXPECT_LT(qdist(r1.phi.grid[k], e.phi.grid[k]), 1e-12);
  }
  EXPECT_EQ(r0.z, e.z);
}

TEST(Rotate, HalfTurnSwapsFusionFactors) {
  Rng rng(52);
  const Paths s = random_paths(rng, 3, 64);
  const MickElement p12 = over(rng, s.g[0], s.g[1]), p23 = over(rng, s.g[1], s.g[2]);
  const DiskMap f13 = filling(rng, fuse(s.g[0], s.g[2]));
  const MickElement lhs = rotate_action(fusion(p12, p23, f13, cal()), 0.5);
  const MickElement rhs =
      fusion(rotate_action(p23, 0.5), rotate_action(p12, 0.5), rotate_action(MickElement{f13, 1.0}, 0.5).phi, cal());
  EXPECT_LT(off(equivalence_defect(lhs, rhs, cal())), 5e-3);
}

// ---- canonical section ----

TEST(Canonical, FusionIdempotent) {
  Rng rng(61);
  const Paths s = random_paths(rng, 1, 64);
  const MickElement c = canonical_section(s.g[0], kR);
  EXPECT_EQ(c.z, Complex(1.0, 0.0));
  EXPECT_LT(off(equivalence_defect(fusion(c, c, c.phi, cal()), c, cal())), 5e-3);
}

TEST(Canonical, Neutral) {
  Rng rng(62);
  const Paths s = random_paths(rng, 2, 64);
  const MickElement p = over(rng, s.g[0], s.g[1]);
  const MickElement c = canonical_section(s.g[1], kR);
  EXPECT_LT(off(equivalence_defect(fusion(p, c, p.phi, cal()), p, cal())), 5e-3);
}

TEST(Canonical, Homomorphism) {
  Rng rng(63);
  const Paths s = random_paths(rng, 1, 64), t = random_paths(rng, 1, 64);
  const MickElement c1 = canonical_section(s.g[0], kR), c2 = canonical_section(t.g[0], kR);
  const MickElement c12 = canonical_section(path_product(s.g[0], t.g[0]), kR);
  EXPECT_LT(off(equivalence_defect(product(c1, c2, cal()), c12, cal())), 5e-3);
}

// ---- concatenation ----

TEST(Concat, ConstantLoopsGiveCanonical) {
  const Quat q = qexp(Vec3(0.2, 0.5, -0.3));
  const MickElement p{DiskMap::constant(kR, 64, q), 1.0};
  const MickElement c = concat_lift(p, p, SmoothingMap::standard(64), cal(), 24);
  EXPECT_LT(off(equivalence_defect(c, MickElement{DiskMap::constant(kR, 128, q), 1.0}, cal())), 5e-3);
}

TEST(Concat, IndependentOfSmoothing) {
  Rng rng(71);
  const Quat base = random_unit_quat(rng);
  const MickElement p1 = random_element(rng, based_loop_su2(rng, 256, base, 0.3, 1));
  const MickElement p2 = random_element(rng, based_loop_su2(rng, 256, base, 0.3, 1));
  const MickElement a = concat_lift(p1, p2, SmoothingMap::standard(256), cal());
  const MickElement b = concat_lift(p1, p2, SmoothingMap::standard(256, 0.1), cal());
  EXPECT_LT(off(equivalence_defect(a, b, cal())), 5e-3);
}

TEST(Concat, Multiplicative) {
  Rng rng(72);
  const Quat b1 = random_unit_quat(rng), b2 = random_unit_quat(rng);
  const MickElement p1 = random_element(rng, based_loop_su2(rng, 256, b1, 0.3, 1));
  const MickElement p2 = random_element(rng, based_loop_su2(rng, 256, b1, 0.3, 1));
  const MickElement q1 = random_element(rng, based_loop_su2(rng, 256, b2, 0.3, 1));
  const MickElement q2 = random_element(rng, based_loop_su2(rng, 256, b2, 0.3, 1));
  const SmoothingMap phi = SmoothingMap::standard(256);
  const MickElement lhs = concat_lift(product(p1, q1, cal()), product(p2, q2, cal()), phi, cal());
  const MickElement rhs = product(concat_lift(p1, p2, phi, cal()), concat_lift(q1, q2, phi, cal()), cal());
  EXPECT_LT(off(equivalence_defect(lhs, rhs, cal())), 5e-3);
}

TEST(Concat, DifferentBasePointsThrow) {
  Rng rng(73);
  const MickElement p1 = random_element(rng, based_loop_su2(rng, 64, random_unit_quat(rng)));
  const MickElement p2 = random_element(rng, based_loop_su2(rng, 64, random_unit_quat(rng)));
  EXPECT_THROW(concat_lift(p1, p2, SmoothingMap::standard(64), cal()), EndpointMismatch);
}

// ---- disjoint commutativity ----

TEST(Commutator, DisjointBumpLoopsCommute) {
  Rng rng(81);
  const Support s1{0.0, 0.5}, s2{0.5, 1.0};
  for (int k = 0; k < 2; ++k) {
    const MickElement p1 = random_element(rng, bump_loop_su2(rng, 128, s1.a, s1.b, 0.4));
    const MickElement p2 = random_element(rng, bump_loop_su2(rng, 128, s2.a, s2.b, 0.4));
    EXPECT_LT(off(commutator_defect(p1, s1, p2, s2, cal())), 1e-2);
  }
}

TEST(Commutator, IdentityFactorIsExact) {
  Rng rng(82);
  const Support s1{0.0, 0.5}, s2{0.5, 1.0};
  const MickElement p1 = random_element(rng, bump_loop_su2(rng, 128, s1.a, s1.b, 0.4));
  const MickElement one{DiskMap::constant(kR, 128, Quat::Identity()), 1.0};
  EXPECT_EQ(commutator_defect(p1, s1, one, s2, cal()), Complex(1.0, 0.0));
}

TEST(Commutator, ElementCommutesWithItself) {
  Rng rng(83);
  const Support s{0.1, 0.6};
  const MickElement p = random_element(rng, bump_loop_su2(rng, 128, s.a, s.b, 0.4));
  EXPECT_EQ(commutator_defect(p, s, p, s, cal()), Complex(1.0, 0.0));
}

TEST(Commutator, OverlappingSupportsThrow) {
  Rng rng(84);
  const Support s1{0.0, 0.6}, s2{0.4, 1.0};
  const MickElement p1 = random_element(rng, bump_loop_su2(rng, 128, s1.a, s1.b, 0.4));
  const MickElement p2 = random_element(rng, bump_loop_su2(rng, 128, s2.a, s2.b, 0.4));
  EXPECT_THROW(commutator_defect(p1, s1, p2, s2, cal()), SupportOverlap);
}

TEST(Commutator, LoopOutsideDeclaredSupportThrows) {
  Rng rng(85);
  const MickElement p1 = random_element(rng, bump_loop_su2(rng, 128, 0.0, 0.7, 0.4));
  const MickElement p2 = random_element(rng, bump_loop_su2(rng, 128, 0.7, 1.0, 0.4));
  EXPECT_THROW(commutator_defect(p1, Support{0.0, 0.5}, p2, Support{0.7, 1.0}, cal()), SupportOverlap);
}

// ---- splitting ----

std::vector<double> trig_loop(int M, double a, double b, double c, double shift) {
  std::vector<double> f(M);
  for (int j = 0; j < M; ++j) {
    const double z = static_cast<double>(j) / M + shift;
    f[j] = a + b * std::cos(kTwoPi * z) + c * std::sin(2.0 * kTwoPi * z);
  }
  return f;
}

TEST(Splitting, ConstantLoopGivesZero) {
  const Vec3 xi = Vec3(1.0, 2.0, -0.5).normalized();
  EXPECT_LT(std::abs(splitting_central_component(std::vector<double>(64, 0.7), xi, 1e-2, cal())), 1e-3);
}

TEST(Splitting, LinearAndRotationEquivariant) {
  const Vec3 xi = Vec3(0.3, -1.0, 0.4).normalized();
  const double s = splitting_central_component(trig_loop(64, 0.4, 0.8, -0.6, 0.0), xi, 1e-2, cal());
  const double s2 = splitting_central_component(trig_loop(64, 0.8, 1.6, -1.2, 0.0), xi, 1e-2, cal());
  const double sr = splitting_central_component(trig_loop(64, 0.4, 0.8, -0.6, 0.25), xi, 1e-2, cal());
  EXPECT_LE(std::abs(s2 - 2.0 * s), 0.05 * std::abs(2.0 * s) + 1e-9);
  EXPECT_LT(std::abs(sr - s), 1e-2);
}

// ---- Polyakov-Wiegmann ----

TEST(PolyakovWiegmann, ConstantFactor) {
  Rng rng(91);
  const SphereMap a = random_sphere_map(rng, 32, 64);
  const SphereMap c = sphere_from_function(32, 64, [](const Vec3&) { return qexp(Vec3(0.4, 0.1, -0.7)); });
  EXPECT_LT(polyakov_wiegmann_defect(a, c, cal()).modulus, 1e-3);
}

TEST(PolyakovWiegmann, RankOneSquare) {
  Rng rng(92);
  const SphereMap a = rank_one_sphere_map(rng, 64, 128);
  EXPECT_LT(polyakov_wiegmann_defect(a, a, cal()).modulus, 2e-3);
}

TEST(PolyakovWiegmann, RandomPair) {
  Rng rng(93);
  const SphereMap a = random_sphere_map(rng, 128, 256), b = random_sphere_map(rng, 128, 256);
  const PwDefect d = polyakov_wiegmann_defect(a, b, cal());
  EXPECT_LT(d.modulus, 5e-3);
  EXPECT_LT(std::abs(d.phase_turns), 5e-3);
}

}  // namespace
