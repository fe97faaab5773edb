#include "fbvp/bk_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fbvp/errors.hpp"

namespace fbvp {

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (max_iter < 1) throw ConfigError("solver max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("solver damping must lie in (0, 1]");
  if (initial_guess == InitialGuess::User && !user_guess) {
    throw ConfigError("user initial guess requested but none supplied");
  }
}

namespace {

Field constant_shell(const PolarGrid& g, double rho) {
  Field v(g);
  for (int i = 1; i <= g.n_r(); ++i) {
    const double taper = std::min(1.0, (g.r(i) - g.domain().r_inner()) / g.dr());
    for (int j = 0; j < g.n_theta(); ++j) v(i, j) = rho * taper;
  }
  return v;
}

Field initial_shift(const ProblemSpec& spec, const AuxSolutions& aux, double rho,
                    const SolverOptions& opts) {
  const PolarGrid& g = spec.grid();
  switch (opts.initial_guess) {
    case InitialGuess::GammaTildeScaled: {
      const double n = aux.gamma.max_abs();
      if (n > 0.0) return (rho / n) * aux.gamma;
      return constant_shell(g, rho);
    }
    case InitialGuess::ConstantShell:
      return constant_shell(g, rho);
    case InitialGuess::User: {
      Field v = *opts.user_guess;
      if (!(v.grid() == g)) throw ConfigError("user initial guess lives on a different grid");
      for (int j = 0; j < g.n_theta(); ++j) v(0, j) = 0.0;
      for (double& x : v.values()) x = std::max(x, 0.0);
      const double n = v.max_abs();
      if (!(n > 0.0)) throw ConfigError("user initial guess is zero on the annulus");
      return (rho / n) * std::move(v);
    }
  }
  return constant_shell(g, rho);
}

ExtendedField shifted(const AuxSolutions& aux, const Field& v) {
  return aux.phi.with_annulus(aux.phi.annulus() + v);
}

struct Defects {
  double fp_residual = 0.0;
  double cone_violation = 0.0;
  double norm_deviation = 0.0;
};

// Defects of u against phi + lambda T(u), given T(u) on the annulus.
Defects measure(const AuxSolutions& aux, const ExtendedField& u, double lambda, double rho,
                const Field& tu) {
  Defects d;
  auto uv = u.annulus().values();
  auto pv = aux.phi.annulus().values();
  auto tv = tu.values();
  double shift_norm = 0.0;
  double shift_min = 0.0;
  for (std::size_t k = 0; k < uv.size(); ++k) {
    const double shift = uv[k] - pv[k];
    d.fp_residual = std::max(d.fp_residual, std::abs(shift - lambda * tv[k]));
    shift_norm = std::max(shift_norm, std::abs(shift));
    shift_min = std::min(shift_min, shift);
  }
  for (const Point& p : hole_lattice(u.grid())) {
    const double shift = u.hole(p) - aux.phi.hole(p);
    d.fp_residual = std::max(d.fp_residual, std::abs(shift));
    shift_norm = std::max(shift_norm, std::abs(shift));
    shift_min = std::min(shift_min, shift);
  }
  d.cone_violation = std::max(0.0, -shift_min);
  d.norm_deviation = std::abs(shift_norm - rho);
  return d;
}

}  // namespace

SolutionPair solve_pair(const ProblemSpec& spec, const AuxSolutions& aux, double rho,
                        const SolverOptions& opts) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be positive");
  opts.validate();
  const double ctol = cone_tol(rho);

  Field v = initial_shift(spec, aux, rho, opts);
  double step = 0.0;
  double lambda = 0.0;
  for (int k = 1; k <= opts.max_iter; ++k) {
    ExtendedField u = shifted(aux, v);
    Field w = apply_T(spec, aux, u).annulus();
    const double wn = w.max_abs();
    if (!(wn > 0.0) || !std::isfinite(wn)) {
      throw DegenerateOperatorError("T(u) vanishes at iteration " + std::to_string(k) +
                                    "; the lower-bound hypothesis fails numerically");
    }
    lambda = rho / wn;

    Field candidate = lambda * w;
    for (double& x : candidate.values()) {
      if (x < -ctol) {
        throw SchemeError("iterate left the cone: value " + std::to_string(x) +
                          " below -cone_tol at iteration " + std::to_string(k));
      }
      x = std::max(x, 0.0);
    }

    Field next = opts.damping == 1.0
                     ? std::move(candidate)
                     : (1.0 - opts.damping) * v + opts.damping * candidate;
    next *= rho / next.max_abs();

    step = 0.0;
    for (std::size_t n = 0; n < next.values().size(); ++n) {
      step = std::max(step, std::abs(next.values()[n] - v.values()[n]));
    }
    if (step <= opts.tol * rho) {
      const Defects d = measure(aux, u, lambda, rho, w);
      return {std::move(u), lambda, rho, k, d.fp_residual, d.cone_violation, d.norm_deviation};
    }
    v = std::move(next);
  }
  throw NonConvergenceError("fixed-point iteration did not converge in " +
                                std::to_string(opts.max_iter) + " iterations (last step " +
                                std::to_string(step) + ", lambda " + std::to_string(lambda) + ")",
                            opts.max_iter, step, lambda);
}

std::vector<SweepEntry> sweep(const ProblemSpec& spec, const AuxSolutions& aux,
                              const std::vector<double>& rho_values, const SolverOptions& opts,
                              const SweepOptions& sweep_opts) {
  for (std::size_t k = 0; k < rho_values.size(); ++k) {
    if (!(rho_values[k] > 0.0)) throw ConfigError("sweep values must be positive");
    if (k > 0 && !(rho_values[k] > rho_values[k - 1])) {
      throw ConfigError("sweep values must be strictly increasing");
    }
  }
  std::vector<SweepEntry> out(rho_values.size());
  auto run_one = [&](std::size_t k, const SolverOptions& o) {
    out[k].rho = rho_values[k];
    try {
      out[k].pair = solve_pair(spec, aux, rho_values[k], o);
    } catch (const Error& e) {
      out[k].error = e.what();
    }
  };

  if (!sweep_opts.warm_start) {
    const int jobs = std::max(1, sweep_opts.jobs);
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), out.size());
    if (workers <= 1) {
      for (std::size_t k = 0; k < out.size(); ++k) run_one(k, opts);
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < out.size(); k = next++) run_one(k, opts);
      });
    }
    for (auto& th : pool) th.join();
    return out;
  }

  SolverOptions o = opts;
  for (std::size_t k = 0; k < out.size(); ++k) {
    run_one(k, o);
    if (out[k].pair) {
      o.initial_guess = InitialGuess::User;
      o.user_guess = out[k].pair->u.annulus() - aux.phi.annulus();
    }
  }
  return out;
}

ResidualReport residual_report(const ProblemSpec& spec, const AuxSolutions& aux,
                               const SolutionPair& pair) {
  const ExtendedField& u = pair.u;
  const Field tu = apply_T(spec, aux, u).annulus();
  const Defects d = measure(aux, u, pair.lambda, pair.rho, tu);

  ResidualReport rep;
  rep.fp_residual = d.fp_residual;
  rep.cone_violation = d.cone_violation;
  rep.norm_deviation = d.norm_deviation;
  rep.B_value = eval_B(spec.B(), u, spec.quadrature());

  const PolarGrid& g = spec.grid();
  const Field lu = aux.system->apply(u.annulus());
  const Field fu = nemytskii(spec, u);
  for (int i = 1; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      rep.pde_defect = std::max(rep.pde_defect, std::abs(lu(i, j) - pair.lambda * fu(i, j)));
    }
  }
  for (int j = 0; j < g.n_theta(); ++j) {
    const Point outer = g.node_position(g.n_r(), j);
    const Point inner = g.node_position(0, j);
    const double zeta = spec.zeta()({outer.x1, outer.x2});
    rep.outer_defect = std::max(
        rep.outer_defect, std::abs(u.annulus()(g.n_r(), j) - pair.lambda * zeta * rep.B_value));
    rep.inner_defect =
        std::max(rep.inner_defect, std::abs(u.annulus()(0, j) - spec.psi()({inner.x1, inner.x2})));
  }
  return rep;
}

}  // namespace fbvp
