#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fbvp/bk_solver.hpp"
#include "fbvp/functional.hpp"

namespace fbvp {

/// Parsed run configuration. See docs/config.md for the schema.
struct RunConfig {
  double r_inner = 0.0;
  double r_outer = 0.0;
  int n_r = 0;
  int n_theta = 0;

  ScalarFunc mu = ScalarFunc::constant(1.0, spatial_vars());
  ScalarFunc drift1 = ScalarFunc::constant(0.0, spatial_vars());
  ScalarFunc drift2 = ScalarFunc::constant(0.0, spatial_vars());
  ScalarFunc potential = ScalarFunc::constant(0.0, spatial_vars());
  double mu_floor = 1e-6;

  ScalarFunc f;
  ScalarFunc psi = ScalarFunc::constant(0.0, spatial_vars());
  ScalarFunc zeta = ScalarFunc::constant(1.0, spatial_vars());
  DeviationMap sigma = DeviationMap::identity();
  std::optional<BoundaryFunctional> B;

  std::vector<double> rhos;
  SolverOptions solver;

  std::optional<ScalarFunc> ell;  // over (x1, x2, rho)
  double b_rho = 0.0;
  int lattice = 32;

  AnnularDomain domain() const { return {r_inner, r_outer}; }
  PolarGrid grid() const { return {domain(), n_r, n_theta}; }
  EllipticOperator op() const { return {mu, drift1, drift2, potential, mu_floor}; }
  /// Builds and validates the full problem (assembles the operator).
  ProblemSpec problem() const;
};

/// Throws ConfigError with "name:line: message" diagnostics.
RunConfig parse_config(std::istream& in, const std::string& name = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace fbvp
