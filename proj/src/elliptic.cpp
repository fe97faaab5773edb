#include "fbvp/elliptic.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <string>

#include "fbvp/errors.hpp"

namespace fbvp {

PointFunction point_function(const ScalarFunc& f) {
  return [f](Point p) { return f({p.x1, p.x2}); };
}

EllipticOperator EllipticOperator::laplacian() {
  const auto& vars = spatial_vars();
  return {ScalarFunc::constant(1.0, vars), ScalarFunc::constant(0.0, vars),
          ScalarFunc::constant(0.0, vars), ScalarFunc::constant(0.0, vars), 1.0};
}

struct DiscreteSystem::Impl {
  PolarGrid grid;
  SparseMatrix matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;

  explicit Impl(const PolarGrid& g) : grid(g) {}
};

const PolarGrid& DiscreteSystem::grid() const noexcept { return impl_->grid; }
const SparseMatrix& DiscreteSystem::matrix() const noexcept { return impl_->matrix; }

Field DiscreteSystem::apply(const Field& u) const {
  if (!(u.grid() == impl_->grid)) throw ConfigError("field and system live on different grids");
  Eigen::Map<const Eigen::VectorXd> x(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
  Eigen::VectorXd y = impl_->matrix * x;
  return Field(impl_->grid, std::vector<double>(y.data(), y.data() + y.size()));
}

std::vector<double> DiscreteSystem::solve(std::span<const double> b) const {
  const auto n = static_cast<Eigen::Index>(b.size());
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  const double scale = rhs.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return std::vector<double>(b.size(), 0.0);

  Eigen::VectorXd x = impl_->lu.solve(rhs);
  Eigen::VectorXd r = rhs - impl_->matrix * x;
  double rel = r.lpNorm<Eigen::Infinity>() / scale;
  for (int step = 0; step < 3 && rel > kLinTol * 1e-2; ++step) {
    x += impl_->lu.solve(r);
    r = rhs - impl_->matrix * x;
    rel = r.lpNorm<Eigen::Infinity>() / scale;
  }
  if (!(rel <= kLinTol)) {
    throw SolverError("linear solve stalled at relative residual " + std::to_string(rel), rel);
  }
  return {x.data(), x.data() + x.size()};
}

namespace {

std::string node_name(const PolarGrid& g, int i, int j) {
  const Point p = g.node_position(i, j);
  return "node (" + std::to_string(i) + ", " + std::to_string(j) + ") at (" +
         std::to_string(p.x1) + ", " + std::to_string(p.x2) + ")";
}

}  // namespace

DiscreteSystem assemble(const EllipticOperator& op, const PolarGrid& grid) {
  if (!(op.mu_floor > 0.0)) throw AssemblyError("mu_floor must be positive");

  const int nr = grid.n_r();
  const int nt = grid.n_theta();
  const double dr = grid.dr();
  const double dt = grid.dtheta();
  const auto n = static_cast<Eigen::Index>(grid.node_count());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * 5);
  for (int j = 0; j < nt; ++j) {
    entries.emplace_back(grid.index(0, j), grid.index(0, j), 1.0);
    entries.emplace_back(grid.index(nr, j), grid.index(nr, j), 1.0);
  }

  for (int i = 1; i < nr; ++i) {
    const double r = grid.r(i);
    const double r_minus = r - 0.5 * dr;
    const double r_plus = r + 0.5 * dr;
    for (int j = 0; j < nt; ++j) {
      const Point x = grid.node_position(i, j);
      const double mu = op.mu({x.x1, x.x2});
      const double a = op.potential({x.x1, x.x2});
      const double b1 = op.drift1({x.x1, x.x2});
      const double b2 = op.drift2({x.x1, x.x2});
      if (!(mu >= op.mu_floor)) {
        throw AssemblyError("diffusion coefficient " + std::to_string(mu) + " below mu_floor " +
                            std::to_string(op.mu_floor) + " at " + node_name(grid, i, j));
      }
      if (!(a >= 0.0)) {
        throw AssemblyError("negative potential " + std::to_string(a) + " at " +
                            node_name(grid, i, j));
      }

      // -mu * [ (1/r) d/dr (r du/dr) + (1/r^2) d2u/dtheta2 ]
      double west = mu * r_minus / (r * dr * dr);
      double east = mu * r_plus / (r * dr * dr);
      double south = mu / (r * r * dt * dt);
      double north = south;

      const double c = std::cos(grid.theta(j));
      const double s = std::sin(grid.theta(j));
      const double b_radial = b1 * c + b2 * s;
      const double b_angular = (-b1 * s + b2 * c) / r;
      if (b_radial > 0.0) {
        west += b_radial / dr;
      } else {
        east -= b_radial / dr;
      }
      if (b_angular > 0.0) {
        south += b_angular / dt;
      } else {
        north -= b_angular / dt;
      }

      const auto row = static_cast<Eigen::Index>(grid.index(i, j));
      entries.emplace_back(row, row, west + east + south + north + a);
      entries.emplace_back(row, grid.index(i - 1, j), -west);
      entries.emplace_back(row, grid.index(i + 1, j), -east);
      entries.emplace_back(row, grid.index(i, (j + nt - 1) % nt), -south);
      entries.emplace_back(row, grid.index(i, (j + 1) % nt), -north);
    }
  }

  auto impl = std::make_shared<DiscreteSystem::Impl>(grid);
  impl->matrix.resize(n, n);
  impl->matrix.setFromTriplets(entries.begin(), entries.end());
  impl->matrix.makeCompressed();

  Eigen::SparseMatrix<double> column_major = impl->matrix;
  impl->lu.analyzePattern(column_major);
  impl->lu.factorize(column_major);
  if (impl->lu.info() != Eigen::Success) {
    throw SolverError("sparse LU factorization failed: " + impl->lu.lastErrorMessage(), 0.0);
  }

  DiscreteSystem sys;
  sys.impl_ = std::move(impl);
  return sys;
}

Field solve_dirichlet(const DiscreteSystem& sys, const Field& rhs, const PointFunction& g_inner,
                      const PointFunction& g_outer) {
  const PolarGrid& g = sys.grid();
  if (!(rhs.grid() == g)) throw ConfigError("right-hand side lives on a different grid");
  std::vector<double> b(rhs.values().begin(), rhs.values().end());
  std::vector<double> inner(g.n_theta());
  std::vector<double> outer(g.n_theta());
  for (int j = 0; j < g.n_theta(); ++j) {
    inner[j] = g_inner(g.node_position(0, j));
    outer[j] = g_outer(g.node_position(g.n_r(), j));
    b[g.index(0, j)] = inner[j];
    b[g.index(g.n_r(), j)] = outer[j];
  }
  Field u(g, sys.solve(b));
  // Boundary rows are identity; pin them to the data bit-exactly.
  for (int j = 0; j < g.n_theta(); ++j) {
    u(0, j) = inner[j];
    u(g.n_r(), j) = outer[j];
  }
  return u;
}

ExtendedField green_apply(const DiscreteSystem& sys, const Field& rhs) {
  const PointFunction zero = [](Point) { return 0.0; };
  return ExtendedField::zero_hole(solve_dirichlet(sys, rhs, zero, zero));
}

AuxSolutions build_aux(std::shared_ptr<const DiscreteSystem> system, const ScalarFunc& psi,
                       const ScalarFunc& zeta) {
  const PolarGrid& g = system->grid();
  const PointFunction psi_fn = point_function(psi);
  const PointFunction zeta_fn = point_function(zeta);
  const PointFunction zero = [](Point) { return 0.0; };

  double zeta_max = 0.0;
  for (int j = 0; j < g.n_theta(); ++j) {
    const double z = zeta_fn(g.node_position(g.n_r(), j));
    if (!(z >= 0.0)) {
      throw ConfigError("zeta must be nonnegative on the outer circle; zeta = " +
                        std::to_string(z) + " at " + node_name(g, g.n_r(), j));
    }
    zeta_max = std::max(zeta_max, z);
  }

  const Field rhs(g);
  Field delta = solve_dirichlet(*system, rhs, psi_fn, zero);
  Field gamma = solve_dirichlet(*system, rhs, zero, zeta_fn);

  const double mp_tol = 1e-10 * (1.0 + zeta_max);
  for (double& v : gamma.values()) {
    if (v < -mp_tol) {
      throw SchemeError("discrete maximum principle violated: gamma = " + std::to_string(v));
    }
    v = std::max(v, 0.0);
  }

  ExtendedField phi(delta, psi_fn);
  ExtendedField gamma_tilde = ExtendedField::zero_hole(gamma);
  return {std::move(system), std::move(delta), std::move(gamma), std::move(phi),
          std::move(gamma_tilde)};
}

AuxSolutions build_aux(const EllipticOperator& op, const PolarGrid& grid, const ScalarFunc& psi,
                       const ScalarFunc& zeta) {
  return build_aux(std::make_shared<const DiscreteSystem>(assemble(op, grid)), psi, zeta);
}

}  // namespace fbvp
