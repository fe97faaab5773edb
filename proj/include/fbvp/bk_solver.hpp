#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbvp/functional.hpp"

namespace fbvp {

enum class InitialGuess {
  /// rho gamma_tilde / |gamma_tilde|, or the constant shell when gamma is zero.
  GammaTildeScaled,
  /// rho on the open annulus, tapered linearly to 0 across the first ring interval.
  ConstantShell,
  /// SolverOptions::user_guess, rescaled to norm rho.
  User,
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 500;
  double damping = 1.0;
  InitialGuess initial_guess = InitialGuess::GammaTildeScaled;
  /// Annulus values of u - phi; must vanish on the inner ring.
  std::optional<Field> user_guess;

  void validate() const;
};

/// u = phi + lambda T(u) with |u - phi| = rho.
struct SolutionPair {
  ExtendedField u;
  double lambda = 0.0;
  double rho = 0.0;
  int iterations = 0;
  double fp_residual = 0.0;     // |u - phi - lambda T(u)|
  double cone_violation = 0.0;  // max(0, -min(u - phi))
  double norm_deviation = 0.0;  // | |u - phi| - rho |
};

inline double cone_tol(double rho) { return 1e-10 * (1.0 + rho); }

/// Normalized fixed-point iteration
///   w = T(phi + v_k),  lambda_k = rho / |w|,
///   v_{k+1} = (1 - damping) v_k + damping lambda_k w,  rescaled to |v_{k+1}| = rho,
/// stopped once |v_{k+1} - v_k| <= tol rho. The returned pair is (phi + v_k,
/// lambda_k), for which the residual is measured exactly.
///
/// Throws DegenerateOperatorError if T(phi + v_k) vanishes,
/// SchemeError if an iterate leaves the cone by more than cone_tol, and
/// NonConvergenceError after max_iter steps.
SolutionPair solve_pair(const ProblemSpec& spec, const AuxSolutions& aux, double rho,
                        const SolverOptions& opts = {});

struct SweepOptions {
  bool warm_start = true;
  /// Worker threads; only used when warm_start is off.
  int jobs = 1;
};

struct SweepEntry {
  double rho = 0.0;
  std::optional<SolutionPair> pair;
  std::string error;  // empty on success
};

/// solve_pair for each rho (strictly increasing, positive). Failures are
/// recorded per entry and the sweep continues.
std::vector<SweepEntry> sweep(const ProblemSpec& spec, const AuxSolutions& aux,
                              const std::vector<double>& rho_values, const SolverOptions& opts = {},
                              const SweepOptions& sweep_opts = {});

struct ResidualReport {
  double fp_residual = 0.0;
  double cone_violation = 0.0;
  double norm_deviation = 0.0;
  double pde_defect = 0.0;    // max over interior nodes of |L_h u - lambda F(u)|
  double outer_defect = 0.0;  // max over the outer ring of |u - lambda zeta B[u]|
  double inner_defect = 0.0;  // max over the inner ring of |u - psi|
  double B_value = 0.0;
};

/// Recomputes every defect of `pair` from scratch.
ResidualReport residual_report(const ProblemSpec& spec, const AuxSolutions& aux,
                               const SolutionPair& pair);

}  // namespace fbvp
