#pragma once

#include <cmath>
#include <numbers>

#include "fbvp/bk_solver.hpp"
#include "fbvp/functional.hpp"

namespace fbvp::testing {

inline const double kE = std::numbers::e;
inline const double kE2 = std::numbers::e * std::numbers::e;

// Reference values evaluated with mpmath at 40 digits from the closed forms
//   sup u0  = ((e^2-1) ln((e^2-1)/2) + 3 - e^2) / 8
//   r_star  = sqrt((e^2-1)/2)
//   B[phi]  = pi/3 + pi (e^2-5)/2
inline constexpr double kTorsionSup = 0.3789306422067397378247;
inline constexpr double kTorsionRStar = 1.787324270932760850594;
inline constexpr double kPhiSquaredIntegral = 4.799918095903808268073;

inline ScalarFunc xy(const char* src) { return ScalarFunc::compile(src, spatial_vars()); }
inline ScalarFunc fuv(const char* src) { return ScalarFunc::compile(src, nonlinearity_vars()); }

inline PolarGrid unit_e_grid(int n_r = 32, int n_theta = 64) {
  return PolarGrid(AnnularDomain(1.0, kE), n_r, n_theta);
}

/// The nonlocal torsion-type example: f = (1+x1^2) exp(-u-v), sigma = x/2,
/// psi = |x|^2, zeta = 1, B = integral of u^2.
inline ProblemSpec torsion_example(const PolarGrid& grid) {
  return ProblemSpec(grid, EllipticOperator::laplacian(), fuv("(1+x1^2)*exp(-u-v)"),
                     DeviationMap::scale(0.5), xy("x1^2+x2^2"), xy("1"),
                     BoundaryFunctional::power_integral(2.0, xy("1")));
}

/// f = c, B = 0, psi = 0: T is the constant map u -> G(c).
inline ProblemSpec linear_problem(const PolarGrid& grid, const char* source = "1") {
  return ProblemSpec(grid, EllipticOperator::laplacian(), fuv(source), DeviationMap::identity(),
                     xy("0"), xy("1"), BoundaryFunctional::power_integral(2.0, xy("0")));
}

inline double u0_closed(double r) { return 0.25 * ((kE2 - 1.0) * std::log(r) + 1.0 - r * r); }

}  // namespace fbvp::testing
