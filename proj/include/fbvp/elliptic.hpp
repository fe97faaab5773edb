#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "fbvp/expr.hpp"
#include "fbvp/geometry.hpp"

namespace fbvp {

/// Wraps an (x1, x2) expression as a function of a point.
PointFunction point_function(const ScalarFunc& f);

/// L u = -mu(x) Lap u + (drift1, drift2) . grad u + potential(x) u.
struct EllipticOperator {
  ScalarFunc mu;
  ScalarFunc drift1;
  ScalarFunc drift2;
  ScalarFunc potential;
  double mu_floor = 1.0;

  /// L = -Lap.
  static EllipticOperator laplacian();
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Assembled and factorized Dirichlet system on the annulus nodes. Interior
/// rows carry the stencil of L, boundary rows the identity. Immutable; solves
/// with distinct right-hand sides may run concurrently.
class DiscreteSystem {
 public:
  static constexpr double kLinTol = 1e-10;

  const PolarGrid& grid() const noexcept;
  const SparseMatrix& matrix() const noexcept;
  double lin_tol() const noexcept { return kLinTol; }

  /// Matrix-vector product: L_h u on interior rows, u itself on boundary rows.
  Field apply(const Field& u) const;
  /// Solves A x = b. Throws SolverError when the relative residual stays
  /// above lin_tol after iterative refinement.
  std::vector<double> solve(std::span<const double> b) const;

 private:
  friend DiscreteSystem assemble(const EllipticOperator& op, const PolarGrid& grid);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Polar finite differences: conservative centered stencil for the
/// Laplacian, first-order upwinding for the drift. The result is an M-matrix
/// whenever mu >= mu_floor > 0 and potential >= 0 at every interior node;
/// otherwise AssemblyError names the offending node.
DiscreteSystem assemble(const EllipticOperator& op, const PolarGrid& grid);

/// Interior rows take `rhs`, boundary rings take g_inner / g_outer at the
/// exact node positions.
Field solve_dirichlet(const DiscreteSystem& sys, const Field& rhs, const PointFunction& g_inner,
                      const PointFunction& g_outer);

/// Green operator: zero Dirichlet data, extended by zero into the hole.
ExtendedField green_apply(const DiscreteSystem& sys, const Field& rhs);

struct AuxSolutions {
  std::shared_ptr<const DiscreteSystem> system;
  Field delta;                // L delta = 0, delta = psi on the inner circle, 0 on the outer
  Field gamma;                // L gamma = 0, gamma = 0 on the inner circle, zeta on the outer
  ExtendedField phi;          // psi on the hole, delta on the annulus
  ExtendedField gamma_tilde;  // gamma, zero on the hole
};

/// Throws ConfigError when zeta < 0 at an outer node and SchemeError when
/// gamma dips below -1e-10 (1 + max zeta). Smaller negatives are clipped to 0.
AuxSolutions build_aux(std::shared_ptr<const DiscreteSystem> system, const ScalarFunc& psi,
                       const ScalarFunc& zeta);
AuxSolutions build_aux(const EllipticOperator& op, const PolarGrid& grid, const ScalarFunc& psi,
                       const ScalarFunc& zeta);

}  // namespace fbvp
