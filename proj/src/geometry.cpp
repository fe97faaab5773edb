#include "fbvp/geometry.hpp"

#include <algorithm>
#include <string>

#include "fbvp/errors.hpp"

namespace fbvp {

AnnularDomain::AnnularDomain(double r_inner, double r_outer) : r_inner_(r_inner), r_outer_(r_outer) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner) || !std::isfinite(r_outer)) {
    throw ConfigError("annular domain requires 0 < r_inner < r_outer, got r_inner=" +
                      std::to_string(r_inner) + ", r_outer=" + std::to_string(r_outer));
  }
}

PolarGrid::PolarGrid(const AnnularDomain& domain, int n_r, int n_theta)
    : domain_(domain), n_r_(n_r), n_theta_(n_theta) {
  if (n_r < 2) throw ConfigError("n_r must be >= 2, got " + std::to_string(n_r));
  if (n_theta < 8) throw ConfigError("n_theta must be >= 8, got " + std::to_string(n_theta));
  dr_ = (domain.r_outer() - domain.r_inner()) / n_r;
  dtheta_ = 2.0 * std::numbers::pi / n_theta;
}

Point PolarGrid::node_position(int i, int j) const {
  // Exact end rings; the interior formula could drift by an ulp.
  const double radius = i == n_r_ ? domain_.r_outer() : r(i);
  const double t = theta(j);
  return {radius * std::cos(t), radius * std::sin(t)};
}

PolarGrid build_grid(const AnnularDomain& domain, int n_r, int n_theta) {
  return PolarGrid(domain, n_r, n_theta);
}

// --- Field -----------------------------------------------------------------

Field::Field(const PolarGrid& grid, double fill) : grid_(grid), values_(grid.node_count(), fill) {}

Field::Field(const PolarGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count()) {
    throw ConfigError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                      std::to_string(grid_.node_count()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("field contains a non-finite value");
  }
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

namespace {
void require_same_grid(const PolarGrid& a, const PolarGrid& b) {
  if (!(a == b)) throw ConfigError("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

// --- ExtendedField ---------------------------------------------------------

ExtendedField::ExtendedField(Field annulus, PointFunction hole)
    : ExtendedField(std::move(annulus), std::move(hole), false) {}

ExtendedField::ExtendedField(Field annulus, PointFunction hole, bool zero_hole)
    : annulus_(std::move(annulus)), hole_(std::move(hole)), zero_hole_(zero_hole) {
  const PolarGrid& g = annulus_.grid();
  const double tol = 1e-8 * (1.0 + annulus_.max_abs());
  for (int j = 0; j < g.n_theta(); ++j) {
    const Point p = g.node_position(0, j);
    const double gap = std::abs(annulus_(0, j) - hole_(p));
    if (!(gap <= tol)) {
      throw ConfigError("extended field is discontinuous across the inner circle at node (0, " +
                        std::to_string(j) + "): jump " + std::to_string(gap));
    }
  }
}

ExtendedField ExtendedField::zero_hole(Field annulus) {
  return ExtendedField(std::move(annulus), [](Point) { return 0.0; }, true);
}

ExtendedField ExtendedField::with_annulus(Field annulus) const {
  return ExtendedField(std::move(annulus), hole_, zero_hole_);
}

double eval_extended(const ExtendedField& u, Point p) {
  const PolarGrid& g = u.grid();
  const AnnularDomain& d = g.domain();
  double r = p.norm();
  if (r <= d.r_inner()) return u.hole(p);
  if (r > d.r_outer() + d.geom_tol()) {
    throw DomainViolationError("point (" + std::to_string(p.x1) + ", " + std::to_string(p.x2) +
                               ") lies outside the outer disk");
  }
  r = std::min(r, d.r_outer());

  const double s = (r - d.r_inner()) / g.dr();
  const int i = std::min(static_cast<int>(s), g.n_r() - 1);
  const double t = std::clamp(s - i, 0.0, 1.0);

  double theta = std::atan2(p.x2, p.x1);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const double a = theta / g.dtheta();
  int j = static_cast<int>(a);
  const double w = std::clamp(a - j, 0.0, 1.0);
  j %= g.n_theta();
  const int jn = (j + 1) % g.n_theta();

  const Field& f = u.annulus();
  return (1.0 - t) * ((1.0 - w) * f(i, j) + w * f(i, jn)) +
         t * ((1.0 - w) * f(i + 1, j) + w * f(i + 1, jn));
}

// --- Quadrature ------------------------------------------------------------

int default_hole_rings(const PolarGrid& grid) {
  const AnnularDomain& d = grid.domain();
  const double rings = grid.n_r() * d.r_inner() / (d.r_outer() - d.r_inner());
  return std::max(4, static_cast<int>(std::ceil(rings - 1e-9)));
}

QuadratureRule::QuadratureRule(const PolarGrid& grid, int n_r_hole)
    : grid_(grid), n_r_hole_(n_r_hole > 0 ? n_r_hole : default_hole_rings(grid)) {
  const AnnularDomain& d = grid.domain();
  const double dtheta = grid.dtheta();
  weights_.resize(grid.node_count());
  for (int i = 0; i <= grid.n_r(); ++i) {
    const double lo = i == 0 ? d.r_inner() : d.r_inner() + (i - 0.5) * grid.dr();
    const double hi = i == grid.n_r() ? d.r_outer() : d.r_inner() + (i + 0.5) * grid.dr();
    const double area = 0.5 * dtheta * (hi * hi - lo * lo);
    for (int j = 0; j < grid.n_theta(); ++j) weights_[grid.index(i, j)] = area;
  }

  const double h = d.r_inner() / n_r_hole_;
  hole_points_.reserve(static_cast<std::size_t>(n_r_hole_) * grid.n_theta());
  hole_weights_.reserve(hole_points_.capacity());
  for (int k = 0; k < n_r_hole_; ++k) {
    const double rk = (k + 0.5) * h;
    const double area = 0.5 * dtheta * h * h * (2.0 * k + 1.0);
    for (int j = 0; j < grid.n_theta(); ++j) {
      const double t = grid.theta(j);
      hole_points_.push_back({rk * std::cos(t), rk * std::sin(t)});
      hole_weights_.push_back(area);
    }
  }
}

double QuadratureRule::hole_radius(int k) const {
  return (k + 0.5) * grid_.domain().r_inner() / n_r_hole_;
}

std::vector<Point> hole_lattice(const PolarGrid& grid) {
  QuadratureRule q(grid);
  return {q.hole_points().begin(), q.hole_points().end()};
}

double integrate_omega2(const ExtendedField& u, const QuadratureRule& q) {
  return integrate_omega2(u, q, [](Point, double value) { return value; });
}

double integrate_omega2(const ExtendedField& u, const QuadratureRule& q,
                        const std::function<double(Point, double)>& integrand) {
  const PolarGrid& g = u.grid();
  require_same_grid(g, q.grid());
  double annulus_sum = 0.0;
  auto w = q.weights();
  for (int i = 0; i <= g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      annulus_sum += w[g.index(i, j)] * integrand(g.node_position(i, j), u.annulus()(i, j));
    }
  }
  double hole_sum = 0.0;
  auto pts = q.hole_points();
  auto hw = q.hole_weights();
  for (std::size_t k = 0; k < pts.size(); ++k) hole_sum += hw[k] * integrand(pts[k], u.hole(pts[k]));
  return annulus_sum + hole_sum;
}

double sup_diff(const ExtendedField& u, const ExtendedField& v) {
  require_same_grid(u.grid(), v.grid());
  auto a = u.annulus().values();
  auto b = v.annulus().values();
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  if (u.has_zero_hole() && v.has_zero_hole()) return m;
  for (const Point& p : hole_lattice(u.grid())) m = std::max(m, std::abs(u.hole(p) - v.hole(p)));
  return m;
}

double sup_norm(const ExtendedField& u) {
  double m = u.annulus().max_abs();
  if (u.has_zero_hole()) return m;
  for (const Point& p : hole_lattice(u.grid())) m = std::max(m, std::abs(u.hole(p)));
  return m;
}

}  // namespace fbvp
