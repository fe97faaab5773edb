#include "fbvp/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbvp/errors.hpp"

namespace fbvp {

// --- DeviationMap ----------------------------------------------------------

DeviationMap DeviationMap::identity() { return {}; }

DeviationMap DeviationMap::scale(double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw ConfigError("scale deviation needs a factor in (0, 1], got " + std::to_string(c));
  }
  DeviationMap m;
  m.kind_ = Kind::Scale;
  m.param_ = c;
  return m;
}

DeviationMap DeviationMap::rotate(double angle) {
  if (!std::isfinite(angle)) throw ConfigError("rotation angle must be finite");
  DeviationMap m;
  m.kind_ = Kind::Rotate;
  m.param_ = angle;
  return m;
}

DeviationMap DeviationMap::constant(Point eta) {
  DeviationMap m;
  m.kind_ = Kind::Constant;
  m.eta_ = eta;
  return m;
}

DeviationMap DeviationMap::expressions(ScalarFunc s1, ScalarFunc s2) {
  if (s1.arity() != 2 || s2.arity() != 2) {
    throw ArityError("deviation components must be functions of (x1, x2)");
  }
  DeviationMap m;
  m.kind_ = Kind::Expressions;
  m.s1_ = std::move(s1);
  m.s2_ = std::move(s2);
  return m;
}

Point DeviationMap::operator()(Point x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Scale: return {param_ * x.x1, param_ * x.x2};
    case Kind::Rotate: {
      const double c = std::cos(param_);
      const double s = std::sin(param_);
      return {c * x.x1 - s * x.x2, s * x.x1 + c * x.x2};
    }
    case Kind::Constant: return eta_;
    case Kind::Expressions: return {s1_({x.x1, x.x2}), s2_({x.x1, x.x2})};
  }
  return x;
}

std::string DeviationMap::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Identity: os << "identity"; break;
    case Kind::Scale: os << "scale " << param_; break;
    case Kind::Rotate: os << "rotate " << param_; break;
    case Kind::Constant: os << "constant " << eta_.x1 << ' ' << eta_.x2; break;
    case Kind::Expressions: os << "expr \"" << s1_.source() << "\" \"" << s2_.source() << '"'; break;
  }
  return os.str();
}

// --- BoundaryFunctional ----------------------------------------------------

BoundaryFunctional BoundaryFunctional::power_integral(double p, ScalarFunc weight) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ConfigError("power_integral exponent must be >= 1, got " + std::to_string(p));
  }
  if (weight.arity() != 2) throw ArityError("B weight must be a function of (x1, x2)");
  BoundaryFunctional b;
  b.kind_ = Kind::PowerIntegral;
  b.p_ = p;
  b.weight_ = std::move(weight);
  return b;
}

BoundaryFunctional BoundaryFunctional::point_eval(Point eta) {
  BoundaryFunctional b;
  b.kind_ = Kind::PointEval;
  b.eta_ = eta;
  return b;
}

BoundaryFunctional BoundaryFunctional::linear_integral(ScalarFunc weight) {
  if (weight.arity() != 2) throw ArityError("B weight must be a function of (x1, x2)");
  BoundaryFunctional b;
  b.kind_ = Kind::LinearIntegral;
  b.weight_ = std::move(weight);
  return b;
}

std::string BoundaryFunctional::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::PowerIntegral: os << "power_integral " << p_ << " \"" << weight_.source() << '"'; break;
    case Kind::PointEval: os << "point_eval " << eta_.x1 << ' ' << eta_.x2; break;
    case Kind::LinearIntegral: os << "linear_integral \"" << weight_.source() << '"'; break;
  }
  return os.str();
}

// --- ProblemSpec -----------------------------------------------------------

ProblemSpec::ProblemSpec(const PolarGrid& grid, EllipticOperator op, ScalarFunc f,
                         DeviationMap sigma, ScalarFunc psi, ScalarFunc zeta, BoundaryFunctional B)
    : grid_(grid),
      op_(std::move(op)),
      f_(std::move(f)),
      sigma_(std::move(sigma)),
      psi_(std::move(psi)),
      zeta_(std::move(zeta)),
      B_(std::move(B)),
      quadrature_(grid) {
  if (f_.arity() != 4) throw ArityError("f must be a function of (x1, x2, u, v)");
  if (psi_.arity() != 2) throw ArityError("psi must be a function of (x1, x2)");
  if (zeta_.arity() != 2) throw ArityError("zeta must be a function of (x1, x2)");

  const AnnularDomain& d = grid.domain();
  const double limit = d.r_outer() + d.geom_tol();
  deviated_.reserve(grid.node_count());
  for (int i = 0; i <= grid.n_r(); ++i) {
    for (int j = 0; j < grid.n_theta(); ++j) {
      const Point s = sigma_(grid.node_position(i, j));
      if (!(s.norm() <= limit)) {
        throw ConfigError("deviation " + sigma_.describe() + " maps node (" + std::to_string(i) +
                          ", " + std::to_string(j) + ") outside the outer disk");
      }
      deviated_.push_back(s);
    }
  }
  if (B_.kind() == BoundaryFunctional::Kind::PointEval && !(B_.eta().norm() <= limit)) {
    throw ConfigError("point_eval location lies outside the outer disk");
  }
  system_ = std::make_shared<const DiscreteSystem>(assemble(op_, grid_));
}

AuxSolutions ProblemSpec::build_aux() const { return fbvp::build_aux(system_, psi_, zeta_); }

// --- Operators -------------------------------------------------------------

Field nemytskii(const ProblemSpec& spec, const ExtendedField& u) {
  const PolarGrid& g = spec.grid();
  if (!(u.grid() == g)) throw ConfigError("field and problem live on different grids");
  Field out(g);
  const auto& dev = spec.deviated_nodes();
  const ScalarFunc& f = spec.f();
  for (int i = 0; i <= g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const Point x = g.node_position(i, j);
      const double here = u.annulus()(i, j);
      const double there = eval_extended(u, dev[g.index(i, j)]);
      out(i, j) = f({x.x1, x.x2, here, there});
    }
  }
  return out;
}

double eval_B(const BoundaryFunctional& B, const ExtendedField& u, const QuadratureRule& q) {
  switch (B.kind()) {
    case BoundaryFunctional::Kind::PointEval:
      return eval_extended(u, B.eta());
    case BoundaryFunctional::Kind::LinearIntegral: {
      const ScalarFunc& w = B.weight();
      if (w.is_constant()) return w.constant_value() * integrate_omega2(u, q);
      return integrate_omega2(u, q, [&w](Point x, double value) { return w({x.x1, x.x2}) * value; });
    }
    case BoundaryFunctional::Kind::PowerIntegral: {
      const ScalarFunc& w = B.weight();
      const double p = B.exponent();
      auto power = [p](double value) {
        const double a = std::abs(value);
        return p == 2.0 ? a * a : (p == 1.0 ? a : std::pow(a, p));
      };
      if (w.is_constant()) {
        const double c = w.constant_value();
        if (c == 0.0) return 0.0;
        return c * integrate_omega2(u, q, [&](Point, double value) { return power(value); });
      }
      return integrate_omega2(u, q, [&](Point x, double value) { return w({x.x1, x.x2}) * power(value); });
    }
  }
  return 0.0;
}

ExtendedField apply_T(const ProblemSpec& spec, const AuxSolutions& aux, const ExtendedField& u) {
  const double b = eval_B(spec.B(), u, spec.quadrature());
  if (!std::isfinite(b)) throw EvalDomainError("boundary functional is not finite");
  Field w = green_apply(*aux.system, nemytskii(spec, u)).annulus();
  if (b != 0.0) {
    auto wv = w.values();
    auto gv = aux.gamma.values();
    for (std::size_t k = 0; k < wv.size(); ++k) wv[k] += b * gv[k];
  }
  return ExtendedField::zero_hole(std::move(w));
}

HypothesisReport check_hypotheses(const ProblemSpec& spec, const AuxSolutions& aux, double rho,
                                  const ScalarFunc& ell, double b_rho, int lattice) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(b_rho >= 0.0)) throw ConfigError("b_rho must be nonnegative");
  if (lattice < 2) throw ConfigError("sampling lattice needs at least 2 points per axis");

  const auto& vars = ell.variables();
  const bool with_rho = vars.size() == 3 && vars[2] == "rho";
  if (!(vars.size() == 2 || with_rho) || vars[0] != "x1" || vars[1] != "x2") {
    throw ArityError("ell must be a function of (x1, x2) or (x1, x2, rho)");
  }
  auto ell_at = [&](Point x) { return with_rho ? ell({x.x1, x.x2, rho}) : ell({x.x1, x.x2}); };

  const PolarGrid& g = spec.grid();
  Field ell_field(g);
  for (int i = 0; i <= g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const double v = ell_at(g.node_position(i, j));
      if (!(v >= 0.0)) {
        throw ConfigError("lower bound ell is negative (" + std::to_string(v) + ") at node (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      ell_field(i, j) = v;
    }
  }

  HypothesisReport rep;
  rep.rho = rho;
  rep.ell = ell;
  rep.b_rho = b_rho;

  const Field lower = green_apply(*aux.system, ell_field).annulus();
  double d = 0.0;
  for (std::size_t k = 0; k < lower.values().size(); ++k) {
    d = std::max(d, std::abs(lower.values()[k] + b_rho * aux.gamma.values()[k]));
  }
  rep.d_rho = d;
  rep.satisfied = d > HypothesisReport::kStrictTol;

  rep.phi_sup = sup_norm(aux.phi);
  const double R = rho + rep.phi_sup;
  const ScalarFunc& f = spec.f();
  const double step_u = R / (lattice - 1);
  const double step_v = 2.0 * R / (lattice - 1);
  for (int i = 0; i <= g.n_r() && rep.lower_bound_holds; ++i) {
    for (int j = 0; j < g.n_theta() && rep.lower_bound_holds; ++j) {
      const Point x = g.node_position(i, j);
      const double bound = ell_field(i, j);
      const double slack = 1e-12 * (1.0 + std::abs(bound));
      for (int a = 0; a < lattice && rep.lower_bound_holds; ++a) {
        const double u = a == lattice - 1 ? R : a * step_u;
        for (int b = 0; b < lattice; ++b) {
          const double v = b == lattice - 1 ? R : -R + b * step_v;
          ++rep.lower_bound_samples;
          auto where = [&] {
            std::ostringstream os;
            os.precision(10);
            os << "node (" << i << ", " << j << "), u=" << u << ", v=" << v;
            return os.str();
          };
          double value = 0.0;
          try {
            value = f({x.x1, x.x2, u, v});
          } catch (const EvalDomainError& e) {
            rep.lower_bound_holds = false;
            rep.first_violation = where() + ": " + e.what();
            break;
          }
          if (value < bound - slack) {
            rep.lower_bound_holds = false;
            std::ostringstream os;
            os.precision(10);
            os << where() << ": f=" << value << " < ell=" << bound;
            rep.first_violation = os.str();
            break;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace fbvp
