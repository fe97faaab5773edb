#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbvp/elliptic.hpp"
#include "fbvp/expr.hpp"
#include "fbvp/geometry.hpp"

namespace fbvp {

/// The deviation x -> sigma(x) feeding the second slot of the nonlinearity.
class DeviationMap {
 public:
  enum class Kind { Identity, Scale, Rotate, Constant, Expressions };

  static DeviationMap identity();
  /// x -> c x with c in (0, 1].
  static DeviationMap scale(double c);
  static DeviationMap rotate(double angle);
  static DeviationMap constant(Point eta);
  /// x -> (s1(x1, x2), s2(x1, x2)).
  static DeviationMap expressions(ScalarFunc s1, ScalarFunc s2);

  Kind kind() const noexcept { return kind_; }
  Point operator()(Point x) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Identity;
  double param_ = 1.0;
  Point eta_{};
  ScalarFunc s1_;
  ScalarFunc s2_;
};

/// The functional B in the outer boundary condition u = lambda zeta B[u].
class BoundaryFunctional {
 public:
  enum class Kind { PowerIntegral, PointEval, LinearIntegral };

  /// Integral over the outer disk of w |u|^p, p >= 1.
  static BoundaryFunctional power_integral(double p, ScalarFunc weight);
  /// u(eta).
  static BoundaryFunctional point_eval(Point eta);
  /// Integral over the outer disk of w u.
  static BoundaryFunctional linear_integral(ScalarFunc weight);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return p_; }
  const ScalarFunc& weight() const noexcept { return weight_; }
  Point eta() const noexcept { return eta_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::PowerIntegral;
  double p_ = 1.0;
  ScalarFunc weight_;
  Point eta_{};
};

/// Complete problem data on a fixed grid.
///   L u = lambda f(x, u, u(sigma(x)))   in the annulus
///   u = psi                             on the hole
///   u = lambda zeta B[u]                on the outer circle
class ProblemSpec {
 public:
  /// Validates every component: sigma must map every annulus node into the
  /// closed outer disk and a point-evaluation eta must lie there too
  /// (ConfigError otherwise). The operator is assembled eagerly.
  ProblemSpec(const PolarGrid& grid, EllipticOperator op, ScalarFunc f, DeviationMap sigma,
              ScalarFunc psi, ScalarFunc zeta, BoundaryFunctional B);

  const PolarGrid& grid() const noexcept { return grid_; }
  const EllipticOperator& op() const noexcept { return op_; }
  const ScalarFunc& f() const noexcept { return f_; }
  const DeviationMap& sigma() const noexcept { return sigma_; }
  const ScalarFunc& psi() const noexcept { return psi_; }
  const ScalarFunc& zeta() const noexcept { return zeta_; }
  const BoundaryFunctional& B() const noexcept { return B_; }
  const QuadratureRule& quadrature() const noexcept { return quadrature_; }
  const std::shared_ptr<const DiscreteSystem>& system() const noexcept { return system_; }
  /// sigma evaluated at every annulus node, in node order.
  const std::vector<Point>& deviated_nodes() const noexcept { return deviated_; }

  /// delta, gamma, phi and gamma tilde for this problem.
  AuxSolutions build_aux() const;

 private:
  PolarGrid grid_;
  EllipticOperator op_;
  ScalarFunc f_;
  DeviationMap sigma_;
  ScalarFunc psi_;
  ScalarFunc zeta_;
  BoundaryFunctional B_;
  QuadratureRule quadrature_;
  std::shared_ptr<const DiscreteSystem> system_;
  std::vector<Point> deviated_;
};

/// F(u)(x) = f(x, u(x), u(sigma(x))) at every annulus node.
Field nemytskii(const ProblemSpec& spec, const ExtendedField& u);

double eval_B(const BoundaryFunctional& B, const ExtendedField& u, const QuadratureRule& q);

/// T(u) = G(F(u)) + gamma_tilde B[u]; zero on the hole.
ExtendedField apply_T(const ProblemSpec& spec, const AuxSolutions& aux, const ExtendedField& u);

struct HypothesisReport {
  double rho = 0.0;
  ScalarFunc ell;
  double b_rho = 0.0;
  /// max over annulus nodes of |G(ell) + b_rho gamma|.
  double d_rho = 0.0;
  bool satisfied = false;  // d_rho > strict_tol

  /// Lower-bound condition on f, checked by sampling (u, v) on a lattice in
  /// 0 <= u <= R, |v| <= R, R = rho + sup phi, at every annulus node.
  bool lower_bound_holds = true;
  std::size_t lower_bound_samples = 0;
  double phi_sup = 0.0;
  std::optional<std::string> first_violation;

  static constexpr double kStrictTol = 1e-14;
};

/// `ell` may depend on (x1, x2) or (x1, x2, rho); it must be nonnegative at
/// every annulus node (ConfigError otherwise). `lattice` points per axis.
HypothesisReport check_hypotheses(const ProblemSpec& spec, const AuxSolutions& aux, double rho,
                                  const ScalarFunc& ell, double b_rho, int lattice = 32);

}  // namespace fbvp
