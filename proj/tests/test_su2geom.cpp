#include <gtest/gtest.h>

#include <cmath>

#include "gerbelab/errors.hpp"
#include "gerbelab/mickelsson.hpp"
#include "gerbelab/probes.hpp"
#include "gerbelab/su2geom.hpp"

using namespace gerbelab;

namespace {

const Calibration& cal() { return default_calibration(); }

double qdist(const Quat& a, const Quat& b) { return (a.coeffs() - b.coeffs()).norm(); }

// Distance of exp(2 pi i a) from exp(2 pi i b).
double turns_apart(double a, double b) { return std::abs(phase(a) - phase(b)); }

Vec3 random_vec(Rng& rng) { return Vec3(rng.normal(), rng.normal(), rng.normal()); }

// Disk exp(p(r) (cos(theta) A + sin(theta) B + cos(2 theta) C)) with p flat at
// the centre and on the collar.
DiskMap smooth_disk(int R, int M, const Quat& g, const Vec3& A, const Vec3& B, const Vec3& C) {
  std::vector<Quat> grid(static_cast<std::size_t>(R + 1) * M);
  for (int i = 0; i <= R; ++i)
    for (int j = 0; j < M; ++j) {
      const double r = static_cast<double>(i) / R, t = kTwoPi * j / M;
      const double p = smooth_step(r, 0.0, 0.875);
      grid[static_cast<std::size_t>(i) * M + j] = g * qexp(p * (std::cos(t) * A + std::sin(t) * B) + p * p * std::cos(2 * t) * C);
    }
  return DiskMap::make(R, M, 0.125, std::move(grid));
}

// Right-invariant form dg g^{-1} along s -> g exp(s eta), by central differences.
Vec3 right_form_fd(const Quat& g, const Vec3& eta) {
  const double h = 1e-5;
  const Quat p = g * qexp(h * eta), m = g * qexp(-h * eta);
  const Quat d((p.coeffs() - m.coeffs()) / (2 * h));
  return (d * g.conjugate()).vec();
}

}  // namespace

TEST(ExpLog, Examples) {
  EXPECT_LT(qdist(qexp(Vec3::Zero()), Quat::Identity()), 1e-15);
  EXPECT_LT(qlog(Quat::Identity()).norm(), 1e-15);
  EXPECT_LT(qdist(qexp(Vec3(kPi / 2, 0, 0)), Quat(0, 1, 0, 0)), 1e-15);
  EXPECT_THROW(qlog(Quat(-1, 0, 0, 0)), AntipodeError);
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const Quat q = random_unit_quat(rng);
    if ((q.coeffs() + Quat::Identity().coeffs()).norm() < 0.3) continue;
    EXPECT_LT(qdist(qexp(qlog(q)), q), 1e-12);
  }
}

TEST(Calibration, MatchesVolumeOfUnitThreeSphere) {
  // <a, [b, c]> = 2 det on an orthonormal frame and vol(S^3) = 2 pi^2.
  EXPECT_NEAR(cal().c_H, 1.0 / (4.0 * kPi * kPi), 1e-3 / (4.0 * kPi * kPi));
  EXPECT_NEAR(integrate_H(48, cal().c_H), 1.0, 1e-3);
  EXPECT_NEAR(integrate_H(48, 0.5 * cal().c_H), 0.5, 1e-3);
}

TEST(Calibration, StableUnderRefinement) {
  const Calibration a = calibrate_H(32), b = calibrate_H(64);
  EXPECT_LT(std::abs(a.c_H - b.c_H) / b.c_H, 1e-3);
  EXPECT_EQ(a.s_rho, b.s_rho);
}

TEST(Rho, VanishesOnFlatSecondFactor) {
  Rng rng(2);
  const Quat g1 = random_unit_quat(rng), g2 = random_unit_quat(rng);
  EXPECT_EQ(eval_rho(cal(), g1, g2, {random_vec(rng), Vec3::Zero()}, {random_vec(rng), Vec3::Zero()}), 0.0);
}

TEST(Rho, BilinearAntisymmetric) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Quat g1 = random_unit_quat(rng), g2 = random_unit_quat(rng);
    const TangentPair u{random_vec(rng), random_vec(rng)}, v{random_vec(rng), random_vec(rng)},
        w{random_vec(rng), random_vec(rng)};
    const double a = rng.normal();
    EXPECT_NEAR(eval_rho(cal(), g1, g2, u, v), -eval_rho(cal(), g1, g2, v, u), 1e-13);
    const TangentPair uw{u.xi + a * w.xi, u.eta + a * w.eta};
    EXPECT_NEAR(eval_rho(cal(), g1, g2, uw, v), eval_rho(cal(), g1, g2, u, v) + a * eval_rho(cal(), g1, g2, w, v),
                1e-12);
  }
}

TEST(Rho, MatchesFiniteDifferenceForms) {
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const Quat g1 = random_unit_quat(rng), g2 = random_unit_quat(rng);
    const TangentPair v1{random_vec(rng), random_vec(rng)}, v2{random_vec(rng), random_vec(rng)};
    // theta_1 is the left form on the first factor, theta-bar_2 the right form on the second.
    const double oracle =
        cal().s_rho * cal().c_H * (v1.xi.dot(right_form_fd(g2, v2.eta)) - v2.xi.dot(right_form_fd(g2, v1.eta)));
    EXPECT_NEAR(eval_rho(cal(), g1, g2, v1, v2), oracle, 1e-9);
  }
}

TEST(Delta, Identities) {
  const DeltaDefects d = delta_identity_defects(20, 5, cal());
  EXPECT_LT(d.delta_rho, 1e-6);
  EXPECT_LT(d.dH_minus_drho, 1e-4);
  Rng rng(6);
  const std::array<Vec3, 3> v{random_vec(rng), random_vec(rng), random_vec(rng)};
  const std::array<Vec3, 3> w{random_vec(rng), random_vec(rng), random_vec(rng)};
  EXPECT_LT(std::abs(delta_rho_at(cal(), random_unit_quat(rng), Quat::Identity(), random_unit_quat(rng), v, w)), 1e-12);
}

TEST(Wz, ConstantAndRankOne) {
  const SphereMap c = sphere_from_function(32, 64, [](const Vec3&) { return Quat(0.6, 0.8, 0, 0); });
  EXPECT_LT(turns_apart(wz_action(c, cal()), 0.0), 1e-9);
  Rng rng(7);
  for (int k = 0; k < 5; ++k) EXPECT_LT(turns_apart(wz_action(rank_one_sphere_map(rng, 128, 256), cal()), 0.0), 1e-3);
}

TEST(Wz, EquatorIsHalfVolume) {
  const double s = wz_action(equator_sphere_map(64, 128), cal());
  EXPECT_LT(std::abs(phase(s) + 1.0), 1e-2);
}

TEST(Wz, LeftInvariant) {
  Rng rng(8);
  const SphereMap s = random_sphere_map(rng, 64, 128);
  const Quat g = random_unit_quat(rng);
  SphereMap t = s;
  for (Quat& q : t.grid) q = g * q;
  EXPECT_LT(turns_apart(wz_action(s, cal()), wz_action(t, cal())), 2e-3);
}

TEST(Wz, StableUnderRefinement) {
  Rng a(9), b(9);
  const double coarse = wz_action(random_sphere_map(a, 32, 64), cal());
  const double fine = wz_action(random_sphere_map(b, 64, 128), cal());
  EXPECT_LT(turns_apart(coarse, fine), 1e-3);
}

TEST(Glue, BoundaryAndDegenerateSphere) {
  Rng rng(10);
  const DiskMap d = smooth_disk(32, 64, random_unit_quat(rng), random_vec(rng), random_vec(rng), random_vec(rng));
  const SphereMap s = glue_sphere(d, d);
  for (int j = 0; j < 64; ++j) EXPECT_EQ(s.at(32, j).coeffs(), d.at(32, j).coeffs());
  EXPECT_LT(turns_apart(wz_action(s, cal()), 0.0), 1e-3);
  const DiskMap other = DiskMap::constant(32, 64, Quat(0, 0, 1, 0));
  EXPECT_THROW(glue_sphere(d, other), BoundaryMismatch);
}

TEST(Glue, SwapReversesOrientation) {
  Rng rng(11);
  const DiskMap a = smooth_disk(32, 64, Quat::Identity(), random_vec(rng), random_vec(rng), random_vec(rng));
  const DiskMap b = perturb_disk(a, rng, 0.6);
  const double ab = wz_action(glue_sphere(a, b), cal()), ba = wz_action(glue_sphere(b, a), cal());
  EXPECT_LT(turns_apart(ab, -ba), 2e-3);
  EXPECT_GT(turns_apart(ab, 0.0), 1e-3);
}

TEST(RhoDisk, FlatFactorsAndRefinement) {
  Rng rng(12);
  const Quat g1 = random_unit_quat(rng), g2 = random_unit_quat(rng);
  const Vec3 a1 = random_vec(rng), b1 = random_vec(rng), c1 = random_vec(rng);
  const Vec3 a2 = random_vec(rng), b2 = random_vec(rng), c2 = random_vec(rng);
  const DiskMap d1 = smooth_disk(32, 64, g1, a1, b1, c1), d2 = smooth_disk(32, 64, g2, a2, b2, c2);
  EXPECT_EQ(rho_disk_integral(d1, DiskMap::constant(32, 64, g2), cal()), 0.0);
  EXPECT_NEAR(rho_disk_integral(DiskMap::constant(32, 64, g1), d2, cal()), 0.0, 1e-15);
  const double coarse = rho_disk_integral(d1, d2, cal());
  const double fine = rho_disk_integral(smooth_disk(64, 128, g1, a1, b1, c1), smooth_disk(64, 128, g2, a2, b2, c2), cal());
  EXPECT_LT(std::abs(coarse - fine), 1e-3);
  EXPECT_GT(std::abs(fine), 1e-3);
}

TEST(Trisect, ThinDisksGiveZero) {
  Rng rng(13);
  const PathSU2 g = random_path_su2(rng, 64, random_unit_quat(rng), random_unit_quat(rng));
  const DiskMap thin = canonical_section(g, 32).phi;
  EXPECT_LT(turns_apart(wz_action(trisect_sphere(thin, thin, thin), cal()), 0.0), 1e-3);
}

TEST(Trisect, SeamCarriesTheSharedPath) {
  Rng rng(14);
  const Quat x = random_unit_quat(rng), y = random_unit_quat(rng);
  const PathSU2 g1 = random_path_su2(rng, 64, x, y), g2 = random_path_su2(rng, 64, x, y), g3 = random_path_su2(rng, 64, x, y);
  const DiskMap d12 = cone_filling(fuse(g1, g2), 32), d23 = cone_filling(fuse(g2, g3), 32), d13 = cone_filling(fuse(g1, g3), 32);
  const SphereMap s = trisect_sphere(d12, d23, d13);
  // North pole at the path ends, south pole at the starts; longitude 0 runs along gamma2.
  EXPECT_LT(qdist(s.at(0, 0), y), 1e-12);
  EXPECT_LT(qdist(s.at(s.P, 0), x), 1e-12);
  for (int i = 0; i <= s.P; ++i) EXPECT_LT(qdist(s.at(i, 0), g2.samples[64 - i]), 1e-12);
  EXPECT_THROW(trisect_sphere(d12, d12, d13), SeamMismatch);
}

TEST(Trisect, ExtensionSwapIsAdditive) {
  Rng rng(15);
  const Quat x = random_unit_quat(rng), y = x * qexp(0.4 * random_vec(rng).normalized());
  const PathSU2 g1 = random_path_su2(rng, 64, x, y), g2 = random_path_su2(rng, 64, x, y), g3 = random_path_su2(rng, 64, x, y);
  const DiskMap d12 = perturb_disk(cone_filling(fuse(g1, g2), 32), rng);
  const DiskMap d23 = perturb_disk(cone_filling(fuse(g2, g3), 32), rng);
  const DiskMap d13 = perturb_disk(cone_filling(fuse(g1, g3), 32), rng);
  const DiskMap d13b = perturb_disk(d13, rng, 0.6);
  const double psi = wz_action(trisect_sphere(d12, d23, d13), cal());
  const double psi_b = wz_action(trisect_sphere(d12, d23, d13b), cal());
  const double swap = wz_action(glue_sphere(d13, d13b), cal());
  // The third sector enters with reversed orientation, so replacing phi13 by
  // phi13' adds S(glue(phi13, phi13')).
  EXPECT_LT(turns_apart(psi_b, psi + swap), 2e-3);
  EXPECT_GT(turns_apart(swap, 0.0), 1e-3);
}

TEST(Cylinder, ConstantHomotopyGivesZero) {
  Rng rng(16);
  const LoopSU2 tau = random_loop_su2(rng, 64);
  const DiskMap d = cone_filling(tau, 32);
  Homotopy h = Homotopy::from_function(16, 64, [&](double, double z) { return tau.at(z); });
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 64; ++j) h.at(i, j) = tau.samples[j];
  const SphereMap s = cylinder_sphere(d, d, h);
  EXPECT_LT(turns_apart(wz_action(s, cal()), 0.0), 1e-3);
  const DiskMap far = DiskMap::constant(32, 64, Quat(0, 1, 0, 0));
  EXPECT_THROW(cylinder_sphere(far, d, h), BoundaryMismatch);
}

TEST(Cylinder, ThinHomotopiesAgree) {
  Rng rng(17);
  const LoopSU2 tau = random_loop_su2(rng, 128, 0.5);
  const QuatSpline s(tau.samples, Spline::Kind::Periodic);
  auto psi = [](double z) { return z + 0.5 * std::sin(kTwoPi * z) / kTwoPi; };
  std::vector<Quat> end(129);
  for (int j = 0; j <= 128; ++j) end[j] = s(psi(j / 128.0));
  const LoopSU2 target = LoopSU2::make(end);
  const DiskMap d0 = cone_filling(tau, 32), d1 = cone_filling(target, 32);
  auto family = [&](const std::function<double(double, double)>& w) {
    Homotopy h = Homotopy::from_function(32, 128, [&](double t, double z) { return s(w(t, z)); });
    for (int j = 0; j <= 128; ++j) {
      h.at(0, j) = tau.samples[j];
      h.at(32, j) = end[j];
    }
    return h;
  };
  const Homotopy direct = family([&](double t, double z) {
    const double u = smooth_step(t, 0.0, 1.0);
    return (1 - u) * z + u * psi(z);
  });
  const Homotopy detour = family([&](double t, double z) {
    const double u = smooth_step(t, 0.0, 1.0);
    return (1 - u) * z + u * psi(z) + 0.2 * std::sin(kPi * u) * std::sin(kTwoPi * z) / kTwoPi;
  });
  EXPECT_LT(rank_defect(direct), kThinTol);
  EXPECT_LT(rank_defect(detour), kThinTol);
  const double a = wz_action(cylinder_sphere(d0, d1, direct), cal());
  const double b = wz_action(cylinder_sphere(d0, d1, detour), cal());
  EXPECT_LT(turns_apart(a, b), 2e-3);
}
