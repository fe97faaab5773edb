#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "fbvp/errors.hpp"
#include "fbvp/geometry.hpp"
#include "support.hpp"

using namespace fbvp;
using fbvp::testing::kE;
using fbvp::testing::kE2;
using fbvp::testing::unit_e_grid;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Domain, RejectsBadRadii) {
  EXPECT_THROW(AnnularDomain(0.0, 1.0), ConfigError);
  EXPECT_THROW(AnnularDomain(-1.0, 1.0), ConfigError);
  EXPECT_THROW(AnnularDomain(2.0, 2.0), ConfigError);
  EXPECT_THROW(AnnularDomain(3.0, 2.0), ConfigError);
  EXPECT_THROW(AnnularDomain(1.0, INFINITY), ConfigError);
  EXPECT_NO_THROW(AnnularDomain(1.0, kE));
}

TEST(Grid, RejectsCoarseResolutions) {
  const AnnularDomain d(1.0, kE);
  EXPECT_THROW(PolarGrid(d, 1, 64), ConfigError);
  EXPECT_THROW(PolarGrid(d, 32, 7), ConfigError);
  EXPECT_NO_THROW(PolarGrid(d, 2, 8));
}

TEST(Grid, SpacingAndNodes) {
  const PolarGrid g = build_grid(AnnularDomain(1.0, kE), 64, 128);
  EXPECT_DOUBLE_EQ(g.dr(), (kE - 1.0) / 64);
  EXPECT_DOUBLE_EQ(g.dtheta(), 2.0 * kPi / 128);
  EXPECT_EQ(g.node_count(), 65u * 128u);
  EXPECT_EQ(g.index(3, 5), 3u * 128u + 5u);

  const Point p0 = g.node_position(0, 0);
  EXPECT_EQ(p0.x1, 1.0);
  EXPECT_EQ(p0.x2, 0.0);
  const Point outer = g.node_position(64, 0);
  EXPECT_EQ(outer.x1, kE);
  EXPECT_NEAR(g.node_position(64, 32).x2, kE, 1e-15);
  for (int j = 0; j < g.n_theta(); j += 13) EXPECT_NEAR(g.node_position(64, j).norm(), kE, 4e-16 * kE);
  EXPECT_TRUE(g.is_boundary_ring(0));
  EXPECT_TRUE(g.is_boundary_ring(64));
  EXPECT_FALSE(g.is_boundary_ring(1));
}

TEST(Field, RejectsSizeMismatchAndNonFinite) {
  const PolarGrid g = unit_e_grid(4, 8);
  EXPECT_THROW(Field(g, std::vector<double>(3, 0.0)), ConfigError);
  std::vector<double> bad(g.node_count(), 0.0);
  bad[7] = NAN;
  EXPECT_THROW(Field(g, bad), ConfigError);
  const Field a(g, 1.0);
  const Field b(unit_e_grid(5, 8), 1.0);
  EXPECT_THROW(a + b, ConfigError);
}

TEST(Field, Arithmetic) {
  const PolarGrid g = unit_e_grid(4, 8);
  Field a = Field::sample(g, [](Point p) { return p.x1; });
  const Field b(g, 2.0);
  const Field c = 3.0 * (a + b) - b;
  for (int i = 0; i <= g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) EXPECT_DOUBLE_EQ(c(i, j), 3.0 * (a(i, j) + 2.0) - 2.0);
  EXPECT_NEAR(a.max(), kE, 1e-15);
  EXPECT_NEAR(a.min(), -kE, 1e-15);
  EXPECT_NEAR(a.max_abs(), kE, 1e-15);
}

TEST(Interpolation, ExactForBilinearInRTheta) {
  const PolarGrid g = unit_e_grid(16, 32);
  auto fn = [](double r, double t) { return 0.3 + 1.7 * r - 0.4 * t + 0.9 * r * t; };
  Field f(g);
  for (int i = 0; i <= g.n_r(); ++i) {
    const double r = i == g.n_r() ? kE : g.r(i);
    for (int j = 0; j < g.n_theta(); ++j) f(i, j) = fn(r, g.theta(j));
  }
  const ExtendedField u(f, [&](Point p) {
    double t = std::atan2(p.x2, p.x1);
    if (t < 0.0) t += 2.0 * kPi;
    return fn(1.0, t);
  });
  std::mt19937 rng(1u);
  std::uniform_real_distribution<double> rr(1.0, kE), tt(0.0, 2.0 * kPi - g.dtheta());
  for (int k = 0; k < 500; ++k) {
    const double r = rr(rng), t = tt(rng);
    EXPECT_NEAR(eval_extended(u, {r * std::cos(t), r * std::sin(t)}), fn(r, t), 1e-12);
  }
}

TEST(Interpolation, WrapsAcrossThetaZero) {
  const PolarGrid g = unit_e_grid(8, 16);
  const Field f = Field::sample(g, [](Point p) { return p.x2; });
  const ExtendedField u(f, [](Point p) { return p.x2; });
  // Last cell: between angle 2pi - dtheta and 2pi.
  const double t = 2.0 * kPi - 0.25 * g.dtheta();
  const double r = g.r(3);
  const double expected = 0.25 * f(3, 15) + 0.75 * f(3, 0);
  EXPECT_NEAR(eval_extended(u, {r * std::cos(t), r * std::sin(t)}), expected, 1e-14);
}

TEST(Interpolation, NodesAndHoleAreReproduced) {
  const PolarGrid g = unit_e_grid(8, 16);
  auto psi = [](Point p) { return p.x1 * p.x1 + p.x2 * p.x2; };
  const Field f = Field::sample(g, [](Point p) { return std::exp(p.x1) + p.x2; });
  Field ff = f;
  for (int j = 0; j < g.n_theta(); ++j) ff(0, j) = psi(g.node_position(0, j));
  const ExtendedField u(ff, psi);
  for (int i = 0; i <= g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) EXPECT_NEAR(eval_extended(u, g.node_position(i, j)), ff(i, j), 1e-12);
  EXPECT_EQ(eval_extended(u, {0.3, -0.2}), psi({0.3, -0.2}));
  EXPECT_EQ(eval_extended(u, {0.0, 0.0}), 0.0);
}

TEST(Interpolation, OutsideOuterDisk) {
  const PolarGrid g = unit_e_grid(8, 16);
  const ExtendedField u = ExtendedField::zero_hole(Field::sample(g, [](Point p) { return p.norm() - 1.0; }));
  EXPECT_THROW(eval_extended(u, {kE * 1.001, 0.0}), DomainViolationError);
  EXPECT_THROW(eval_extended(u, {10.0, 10.0}), DomainViolationError);
  // Within geom_tol: clamped onto the outer ring.
  EXPECT_NEAR(eval_extended(u, {kE * (1.0 + 1e-13), 0.0}), kE - 1.0, 1e-12);
}

TEST(ExtendedField, ContinuityIsChecked) {
  const PolarGrid g = unit_e_grid(8, 16);
  Field f(g, 1.0);
  EXPECT_NO_THROW(ExtendedField(f, [](Point) { return 1.0; }));
  EXPECT_NO_THROW(ExtendedField(f, [](Point) { return 1.0 + 1e-9; }));
  EXPECT_THROW(ExtendedField(f, [](Point) { return 1.001; }), ConfigError);
  EXPECT_THROW(ExtendedField::zero_hole(f), ConfigError);
  f = Field(g, 0.0);
  EXPECT_TRUE(ExtendedField::zero_hole(f).has_zero_hole());
}

TEST(Quadrature, WeightSumsAreExact) {
  for (auto [n_r, n_t] : {std::pair{2, 8}, {16, 32}, {64, 128}, {37, 91}}) {
    const PolarGrid g = unit_e_grid(n_r, n_t);
    const QuadratureRule q(g);
    // Long double accumulation keeps summation rounding out of the comparison.
    const double annulus = static_cast<double>(std::accumulate(q.weights().begin(), q.weights().end(), 0.0L));
    const double hole = static_cast<double>(std::accumulate(q.hole_weights().begin(), q.hole_weights().end(), 0.0L));
    EXPECT_NEAR(annulus, kPi * (kE2 - 1.0), 1e-14 * kPi * kE2);
    EXPECT_NEAR(hole, kPi, 1e-14 * kPi);
  }
}

TEST(Quadrature, AreasOfDiskAndAnnulus) {
  const PolarGrid g = unit_e_grid(32, 64);
  const QuadratureRule q(g);
  const ExtendedField one(Field(g, 1.0), [](Point) { return 1.0; });
  EXPECT_NEAR(integrate_omega2(one, q), 23.21340435736338723615, 1e-12);
  const ExtendedField shell = ExtendedField::zero_hole(Field(g, 0.0));
  auto chi = [](Point p, double) { return p.norm() > 1.0 + 1e-12 ? 1.0 : 0.0; };
  // Indicator of the open annulus misses the inner half ring exactly.
  const double inner_half = 0.5 * g.dtheta() * ((1.0 + 0.5 * g.dr()) * (1.0 + 0.5 * g.dr()) - 1.0) * g.n_theta();
  EXPECT_NEAR(integrate_omega2(shell, q, chi), 20.07181170377359399769 - inner_half, 1e-12);
}

TEST(Quadrature, HoleRingsAndRadii) {
  const PolarGrid g = unit_e_grid(32, 64);
  const QuadratureRule q(g);
  EXPECT_EQ(q.hole_rings(), static_cast<int>(std::ceil(32.0 / (kE - 1.0))));
  EXPECT_EQ(q.hole_points().size(), static_cast<std::size_t>(q.hole_rings()) * 64u);
  EXPECT_DOUBLE_EQ(q.hole_radius(0), 0.5 / q.hole_rings());
  EXPECT_EQ(QuadratureRule(unit_e_grid(2, 8)).hole_rings(), 4);
  EXPECT_EQ(QuadratureRule(g, 7).hole_rings(), 7);
  EXPECT_EQ(hole_lattice(g).size(), q.hole_points().size());
}

TEST(Quadrature, ThetaConstantIntegrandReducesToRadialSum) {
  const PolarGrid g = unit_e_grid(24, 48);
  const QuadratureRule q(g);
  auto radial = [](double r) { return std::exp(-r) * r; };
  const ExtendedField u(Field::sample(g, [&](Point p) { return radial(p.norm()); }),
                        [&](Point p) { return radial(p.norm()); });
  double expected = 0.0;
  for (int i = 0; i <= g.n_r(); ++i) {
    const double r = i == g.n_r() ? kE : g.r(i);
    expected += q.weights()[g.index(i, 0)] * g.n_theta() * radial(r);
  }
  for (int k = 0; k < q.hole_rings(); ++k) {
    expected += q.hole_weights()[static_cast<std::size_t>(k) * g.n_theta()] * g.n_theta() *
                radial(q.hole_radius(k));
  }
  EXPECT_NEAR(integrate_omega2(u, q), expected, 1e-12);
}

TEST(Quadrature, SecondOrderOnSmoothIntegrand) {
  // Integral of |x|^2 over the disk of radius e is pi e^4 / 2.
  const double exact = 0.5 * kPi * kE2 * kE2;
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const PolarGrid g = unit_e_grid(16 << level, 32 << level);
    auto fn = [](Point p) { return p.x1 * p.x1 + p.x2 * p.x2; };
    const ExtendedField u(Field::sample(g, fn), fn);
    const double err = std::abs(integrate_omega2(u, QuadratureRule(g)) - exact);
    if (level > 0) {
      EXPECT_GT(prev / err, 3.0);
      EXPECT_LT(prev / err, 5.0);
    }
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Quadrature, PhiSquaredIntegral) {
  // phi = |x|^2 on the unit disk, 1 - ln r on the annulus (1, e).
  const PolarGrid g = unit_e_grid(64, 128);
  const Field f = Field::sample(g, [](Point p) { return 1.0 - std::log(p.norm()); });
  const ExtendedField phi(f, [](Point p) { return p.x1 * p.x1 + p.x2 * p.x2; });
  const double got = integrate_omega2(phi, QuadratureRule(g), [](Point, double u) { return u * u; });
  EXPECT_NEAR(got, fbvp::testing::kPhiSquaredIntegral, 1e-3 * fbvp::testing::kPhiSquaredIntegral);
}

TEST(SupNorm, Examples) {
  const PolarGrid g = unit_e_grid(8, 16);
  const ExtendedField a = ExtendedField::zero_hole(Field(g, 0.0));
  Field f(g, 0.0);
  f(3, 4) = -2.5;
  const ExtendedField b = ExtendedField::zero_hole(f);
  EXPECT_EQ(sup_diff(a, b), 2.5);
  EXPECT_EQ(sup_norm(b), 2.5);
  EXPECT_EQ(sup_diff(b, b), 0.0);

  // Hole contributions are sampled on the lattice.
  Field one(g, 1.0);
  const ExtendedField bump(one, [](Point p) { return 1.0 + 3.0 * (1.0 - p.x1 * p.x1 - p.x2 * p.x2); });
  const double lattice_peak = 1.0 + 3.0 * (1.0 - std::pow(QuadratureRule(g).hole_radius(0), 2));
  EXPECT_NEAR(sup_norm(bump), lattice_peak, 1e-14);

  const ExtendedField other = ExtendedField::zero_hole(Field(unit_e_grid(9, 16), 0.0));
  EXPECT_THROW(sup_diff(a, other), ConfigError);
}
