#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "fbvp/bk_solver.hpp"
#include "fbvp/errors.hpp"
#include "support.hpp"

using namespace fbvp;
using fbvp::testing::fuv;
using fbvp::testing::linear_problem;
using fbvp::testing::torsion_example;
using fbvp::testing::unit_e_grid;
using fbvp::testing::xy;

namespace {

const PolarGrid& grid32() {
  static const PolarGrid g = unit_e_grid(32, 64);
  return g;
}

struct Example {
  ProblemSpec spec = torsion_example(grid32());
  AuxSolutions aux = spec.build_aux();
};

const Example& example() {
  static const Example e;
  return e;
}

}  // namespace

TEST(SolverOptions, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(o.validate());
  o.tol = 0.0;
  EXPECT_THROW(o.validate(), ConfigError);
  o = {};
  o.max_iter = 0;
  EXPECT_THROW(o.validate(), ConfigError);
  o = {};
  o.damping = 1.5;
  EXPECT_THROW(o.validate(), ConfigError);
  o = {};
  o.initial_guess = InitialGuess::User;
  EXPECT_THROW(o.validate(), ConfigError);
}

TEST(Linear, LambdaIsRhoOverSupOfTorsion) {
  const ProblemSpec spec = linear_problem(grid32());
  const AuxSolutions aux = spec.build_aux();
  const double sup_h = green_apply(*spec.system(), Field(grid32(), 1.0)).annulus().max_abs();
  for (double rho : {0.1, 1.0, 7.5}) {
    const SolutionPair p = solve_pair(spec, aux, rho);
    EXPECT_NEAR(p.lambda, rho / sup_h, 1e-14 * rho / sup_h);
    EXPECT_NEAR(p.lambda, rho / fbvp::testing::kTorsionSup, 1e-3 * rho / fbvp::testing::kTorsionSup);
    EXPECT_LE(p.iterations, 2);
    EXPECT_LE(p.fp_residual, 1e-14 * rho);
  }
  const SolutionPair unit = solve_pair(spec, aux, sup_h);
  EXPECT_NEAR(unit.lambda, 1.0, 1e-14);
}

TEST(Linear, ScaleEquivariance) {
  const ProblemSpec one = linear_problem(grid32(), "1");
  const ProblemSpec three = linear_problem(grid32(), "3");
  const double l1 = solve_pair(one, one.build_aux(), 1.0).lambda;
  const double l3 = solve_pair(three, three.build_aux(), 1.0).lambda;
  EXPECT_NEAR(l3, l1 / 3.0, 1e-13 * l1);
}

TEST(Example, PairAtRhoOne) {
  const auto& [spec, aux] = example();
  const SolutionPair p = solve_pair(spec, aux, 1.0);
  EXPECT_GT(p.lambda, 0.0);
  EXPECT_LE(p.fp_residual, 1e-8);
  EXPECT_LE(p.cone_violation, cone_tol(1.0));
  EXPECT_LE(p.norm_deviation, 1e-9);
  EXPECT_NEAR(p.lambda, 0.0469, 0.002);
  EXPECT_FALSE(p.u.has_zero_hole());
  // u = phi on the hole exactly.
  for (const Point& x : hole_lattice(grid32())) ASSERT_EQ(p.u.hole(x), aux.phi.hole(x));
}

TEST(Example, PerturbedLambdaShowsUpInTheResidual) {
  const auto& [spec, aux] = example();
  const SolutionPair p = solve_pair(spec, aux, 1.0);
  const Field tu = apply_T(spec, aux, p.u).annulus();
  const Field shift = p.u.annulus() - aux.phi.annulus();
  const Field off = shift - (1.01 * p.lambda) * tu;
  EXPECT_NEAR(off.max_abs(), 0.01 * p.lambda * tu.max_abs(), 1e-8);
}

TEST(Example, ResidualReportAgrees) {
  const auto& [spec, aux] = example();
  const SolutionPair p = solve_pair(spec, aux, 1.0);
  const ResidualReport r = residual_report(spec, aux, p);
  EXPECT_NEAR(r.fp_residual, p.fp_residual, 1e-12);
  EXPECT_NEAR(r.cone_violation, p.cone_violation, 1e-12);
  EXPECT_NEAR(r.norm_deviation, p.norm_deviation, 1e-12);
  EXPECT_EQ(r.inner_defect, 0.0);
  EXPECT_LE(r.pde_defect, 1e-6);
  EXPECT_LE(r.outer_defect, 1e-8);
  EXPECT_GT(r.B_value, fbvp::testing::kPhiSquaredIntegral * 0.99);
}

TEST(Example, IteratesStayInTheCone) {
  const auto& [spec, aux] = example();
  for (InitialGuess guess : {InitialGuess::GammaTildeScaled, InitialGuess::ConstantShell}) {
    SolverOptions o;
    o.initial_guess = guess;
    const SolutionPair p = solve_pair(spec, aux, 0.5, o);
    const Field shift = p.u.annulus() - aux.phi.annulus();
    EXPECT_GE(shift.min(), -cone_tol(0.5));
    EXPECT_NEAR(shift.max_abs(), 0.5, 1e-9);
  }
}

TEST(Example, InitialGuessesAgree) {
  const auto& [spec, aux] = example();
  SolverOptions a, b, c;
  b.initial_guess = InitialGuess::ConstantShell;
  c.damping = 0.5;
  const double la = solve_pair(spec, aux, 2.0, a).lambda;
  EXPECT_NEAR(solve_pair(spec, aux, 2.0, b).lambda, la, 1e-8 * la);
  EXPECT_NEAR(solve_pair(spec, aux, 2.0, c).lambda, la, 1e-8 * la);
}

TEST(Errors, DegenerateOperator) {
  const PolarGrid g = unit_e_grid(8, 16);
  const ProblemSpec spec(g, EllipticOperator::laplacian(), fuv("0"), DeviationMap::identity(), xy("0"),
                         xy("1"), BoundaryFunctional::power_integral(2.0, xy("0")));
  EXPECT_THROW(solve_pair(spec, spec.build_aux(), 1.0), DegenerateOperatorError);
}

TEST(Errors, NonConvergenceCarriesDiagnostics) {
  const auto& [spec, aux] = example();
  SolverOptions o;
  o.max_iter = 1;
  try {
    solve_pair(spec, aux, 1.0, o);
    FAIL() << "expected non-convergence";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 1);
    EXPECT_GT(e.last_step(), 0.0);
    EXPECT_GT(e.last_lambda(), 0.0);
  }
}

TEST(Errors, BadRho) {
  const auto& [spec, aux] = example();
  EXPECT_THROW(solve_pair(spec, aux, 0.0), ConfigError);
  EXPECT_THROW(solve_pair(spec, aux, -1.0), ConfigError);
  EXPECT_THROW(sweep(spec, aux, {1.0, 0.5}), ConfigError);
  EXPECT_THROW(sweep(spec, aux, {0.0, 0.5}), ConfigError);
}

TEST(Sweep, WarmAndColdStartsAgree) {
  const auto& [spec, aux] = example();
  const std::vector<double> rhos{0.5, 1.0, 2.0};
  const auto warm = sweep(spec, aux, rhos);
  SweepOptions cold;
  cold.warm_start = false;
  const auto fresh = sweep(spec, aux, rhos, {}, cold);
  ASSERT_EQ(warm.size(), 3u);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    ASSERT_TRUE(warm[k].pair && fresh[k].pair) << warm[k].error << fresh[k].error;
    EXPECT_EQ(warm[k].rho, rhos[k]);
    EXPECT_NEAR(warm[k].pair->lambda, fresh[k].pair->lambda, 1e-8 * fresh[k].pair->lambda);
    EXPECT_LE(warm[k].pair->fp_residual, 1e-8 * rhos[k]);
  }
}

TEST(Sweep, SingleValueMatchesSolvePair) {
  const auto& [spec, aux] = example();
  const auto s = sweep(spec, aux, {1.0});
  ASSERT_EQ(s.size(), 1u);
  ASSERT_TRUE(s[0].pair);
  EXPECT_EQ(s[0].pair->lambda, solve_pair(spec, aux, 1.0).lambda);
}

TEST(Sweep, LinearLambdaIsLinearInRho) {
  const ProblemSpec spec = linear_problem(grid32());
  const auto s = sweep(spec, spec.build_aux(), {0.5, 1.0, 2.0, 4.0});
  for (const auto& e : s) {
    ASSERT_TRUE(e.pair);
    EXPECT_NEAR(e.pair->lambda / e.rho, s[0].pair->lambda / s[0].rho, 1e-13);
  }
}

TEST(Sweep, ParallelRunsAreBitIdentical) {
  const auto& [spec, aux] = example();
  const std::vector<double> rhos{0.25, 0.5, 1.0, 2.0};
  SweepOptions serial;
  serial.warm_start = false;
  SweepOptions parallel = serial;
  parallel.jobs = 4;
  const auto a = sweep(spec, aux, rhos, {}, serial);
  const auto b = sweep(spec, aux, rhos, {}, parallel);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    ASSERT_TRUE(a[k].pair && b[k].pair);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a[k].pair->lambda), std::bit_cast<std::uint64_t>(b[k].pair->lambda));
    EXPECT_EQ(a[k].pair->iterations, b[k].pair->iterations);
  }
}

TEST(Sweep, FailuresAreRecordedPerEntry) {
  const auto& [spec, aux] = example();
  SolverOptions o;
  o.max_iter = 1;
  const auto s = sweep(spec, aux, {0.5, 1.0}, o);
  for (const auto& e : s) {
    EXPECT_FALSE(e.pair);
    EXPECT_FALSE(e.error.empty());
  }
}
