#include <gtest/gtest.h>

#include <cmath>

#include "fbvp/errors.hpp"
#include "fbvp/radial_oracle.hpp"
#include "support.hpp"

using namespace fbvp::radial;
using fbvp::testing::kE;

namespace {

double fd_error(const RadialSamples& s, const RadialProfile& exact) {
  double m = 0.0;
  for (std::size_t k = 0; k < s.r.size(); ++k) m = std::max(m, std::abs(s.u[k] - exact.value(s.r[k])));
  return m;
}

}  // namespace

TEST(ClosedForm, TorsionMatchesTheExplicitFormula) {
  const RadialProfile p = torsion_closed_form(1.0, kE, 1.0);
  for (double r : {1.0, 1.3, 1.787, 2.2, kE}) EXPECT_NEAR(p.value(r), fbvp::testing::u0_closed(r), 1e-15);
  EXPECT_NEAR(p.value(1.0), 0.0, 1e-15);
  EXPECT_NEAR(p.value(kE), 0.0, 1e-15);
}

TEST(ClosedForm, HarmonicProfiles) {
  const RadialProfile g = harmonic_closed_form(1.0, kE, 0.0, 1.0);
  const RadialProfile d = harmonic_closed_form(1.0, kE, 1.0, 0.0);
  for (double r : {1.0, 1.5, 2.0, kE}) {
    EXPECT_NEAR(g.value(r), std::log(r), 1e-15);
    EXPECT_NEAR(d.value(r), 1.0 - std::log(r), 1e-15);
  }
  const RadialProfile c = harmonic_closed_form(2.0, 5.0, 0.7, 0.7);
  EXPECT_EQ(c.B, 0.0);
  EXPECT_DOUBLE_EQ(c.value(3.3), 0.7);
  EXPECT_THROW(harmonic_closed_form(0.0, 1.0, 0.0, 1.0), fbvp::ConfigError);
  EXPECT_THROW(torsion_closed_form(2.0, 1.0, 1.0), fbvp::ConfigError);
}

TEST(ClosedForm, SubstitutionIntoTheRadialOperator) {
  for (double c : {1.0, -2.5, 0.0}) {
    const RadialProfile p = torsion_closed_form(0.5, 3.0, c);
    for (double r = 0.5; r <= 3.0; r += 0.25) {
      EXPECT_NEAR(p.radial_operator(r), c, 1e-13 * (1.0 + std::abs(c)));
      const double h = 1e-5;
      const double fd1 = (p.value(r + h) - p.value(r - h)) / (2 * h);
      EXPECT_NEAR(p.derivative(r), fd1, 1e-8);
    }
    EXPECT_NEAR(p.value(0.5), 0.0, 1e-14);
    EXPECT_NEAR(p.value(3.0), 0.0, 1e-14);
  }
  const RadialProfile h = harmonic_closed_form(0.5, 3.0, -1.0, 4.0);
  for (double r = 0.5; r <= 3.0; r += 0.25) EXPECT_NEAR(h.radial_operator(r), 0.0, 1e-13);
}

TEST(Sup, TorsionMaximum) {
  const RadialSup s = radial_sup(torsion_closed_form(1.0, kE, 1.0));
  EXPECT_NEAR(s.r_star, fbvp::testing::kTorsionRStar, 1e-15);
  EXPECT_NEAR(s.value, fbvp::testing::kTorsionSup, 1e-15);
}

TEST(Sup, AgreesWithLongDoubleEvaluation) {
  const long double e2 = std::exp(2.0L);
  const long double expected = ((e2 - 1.0L) * std::log((e2 - 1.0L) / 2.0L) + 3.0L - e2) / 8.0L;
  const RadialSup s = radial_sup(torsion_closed_form(1.0, kE, 1.0));
  EXPECT_LE(std::abs(static_cast<long double>(s.value) - expected) / expected, 1e-14L);
  EXPECT_LE(std::abs(static_cast<long double>(s.r_star) - std::sqrt((e2 - 1.0L) / 2.0L)), 1e-14L);
}

TEST(Sup, MonotoneProfilesPeakAtAnEndpoint) {
  const RadialSup g = radial_sup(harmonic_closed_form(1.0, kE, 0.0, 1.0));
  EXPECT_EQ(g.r_star, kE);
  EXPECT_NEAR(g.value, 1.0, 1e-15);
  const RadialSup d = radial_sup(harmonic_closed_form(1.0, kE, -3.0, 0.0));
  EXPECT_EQ(d.r_star, 1.0);
  EXPECT_NEAR(d.value, 3.0, 1e-15);
}

TEST(FiniteDifference, TorsionAccuracyAndOrder) {
  const RadialProfile exact = torsion_closed_form(1.0, kE, 1.0);
  EXPECT_LT(fd_error(radial_fd_solve(1.0, kE, 1.0, 0.0, 0.0, 256), exact), 1e-4);
  const double e64 = fd_error(radial_fd_solve(1.0, kE, 1.0, 0.0, 0.0, 64), exact);
  const double e128 = fd_error(radial_fd_solve(1.0, kE, 1.0, 0.0, 0.0, 128), exact);
  EXPECT_GE(e64 / e128, 3.0);
  EXPECT_LE(e64 / e128, 5.0);
}

TEST(FiniteDifference, HarmonicWithDirichletData) {
  const RadialProfile exact = harmonic_closed_form(0.5, 2.0, 2.0, -1.0);
  const RadialSamples s = radial_fd_solve(0.5, 2.0, 0.0, 2.0, -1.0, 128);
  EXPECT_EQ(s.u.front(), 2.0);
  EXPECT_EQ(s.u.back(), -1.0);
  EXPECT_EQ(s.r.size(), 129u);
  EXPECT_LT(fd_error(s, exact), 1e-4);
}

TEST(FiniteDifference, VariableLoad) {
  // -u'' - u'/r = 4 - 9r on [1, 2] has u = 1 - r^2 + r^3 once Dirichlet values match.
  auto exact = [](double r) { return 1.0 - r * r + r * r * r; };
  const RadialSamples s =
      radial_fd_solve(1.0, 2.0, [](double r) { return 4.0 - 9.0 * r; }, exact(1.0), exact(2.0), 200);
  for (std::size_t k = 0; k < s.r.size(); ++k) EXPECT_NEAR(s.u[k], exact(s.r[k]), 1e-4);
}

TEST(FiniteDifference, RejectsCoarseGrids) {
  EXPECT_THROW(radial_fd_solve(1.0, 2.0, 1.0, 0.0, 0.0, 3), fbvp::ConfigError);
  EXPECT_THROW(radial_fd_solve(2.0, 1.0, 1.0, 0.0, 0.0, 16), fbvp::ConfigError);
}
