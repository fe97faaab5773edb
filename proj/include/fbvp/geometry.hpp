#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace fbvp {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  double norm() const { return std::hypot(x1, x2); }
  friend bool operator==(const Point&, const Point&) = default;
};

/// Concentric annulus r_inner < |x| < r_outer. The hole is the closed disk of
/// radius r_inner, the outer disk the closed disk of radius r_outer.
class AnnularDomain {
 public:
  AnnularDomain(double r_inner, double r_outer);

  double r_inner() const noexcept { return r_inner_; }
  double r_outer() const noexcept { return r_outer_; }
  double geom_tol() const noexcept { return 1e-12 * r_outer_; }
  double annulus_area() const { return std::numbers::pi * (r_outer_ * r_outer_ - r_inner_ * r_inner_); }
  double hole_area() const { return std::numbers::pi * r_inner_ * r_inner_; }

  friend bool operator==(const AnnularDomain&, const AnnularDomain&) = default;

 private:
  double r_inner_;
  double r_outer_;
};

/// Tensor grid in (r, theta): rings i = 0..n_r, angles j = 0..n_theta-1,
/// periodic in theta. Ring 0 lies on the inner circle, ring n_r on the outer.
class PolarGrid {
 public:
  PolarGrid(const AnnularDomain& domain, int n_r, int n_theta);

  const AnnularDomain& domain() const noexcept { return domain_; }
  int n_r() const noexcept { return n_r_; }
  int n_theta() const noexcept { return n_theta_; }
  int ring_count() const noexcept { return n_r_ + 1; }
  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(n_r_ + 1) * static_cast<std::size_t>(n_theta_);
  }
  double dr() const noexcept { return dr_; }
  double dtheta() const noexcept { return dtheta_; }
  double r(int i) const noexcept { return domain_.r_inner() + i * dr_; }
  double theta(int j) const noexcept { return j * dtheta_; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta_) +
           static_cast<std::size_t>(j);
  }
  Point node_position(int i, int j) const;
  bool is_boundary_ring(int i) const noexcept { return i == 0 || i == n_r_; }

  friend bool operator==(const PolarGrid&, const PolarGrid&) = default;

 private:
  AnnularDomain domain_;
  int n_r_;
  int n_theta_;
  double dr_;
  double dtheta_;
};

PolarGrid build_grid(const AnnularDomain& domain, int n_r, int n_theta);

/// Nodal values on a polar grid, ring-major.
class Field {
 public:
  explicit Field(const PolarGrid& grid, double fill = 0.0);
  /// Throws ConfigError on a size mismatch or a non-finite value.
  Field(const PolarGrid& grid, std::vector<double> values);

  template <class Fn>
  static Field sample(const PolarGrid& grid, Fn&& fn) {
    Field f(grid);
    for (int i = 0; i <= grid.n_r(); ++i) {
      for (int j = 0; j < grid.n_theta(); ++j) f(i, j) = fn(grid.node_position(i, j));
    }
    return f;
  }

  const PolarGrid& grid() const noexcept { return grid_; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_abs() const;
  double min() const;
  double max() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  PolarGrid grid_;
  std::vector<double> values_;
};

using PointFunction = std::function<double(Point)>;

/// A function on the closed outer disk: nodal data on the annulus glued to an
/// analytic function on the hole. Construction checks continuity across the
/// inner circle to compat_tol = 1e-8 (1 + max|values|).
class ExtendedField {
 public:
  ExtendedField(Field annulus, PointFunction hole);
  /// Trivial extension: zero on the hole. Ring 0 must vanish.
  static ExtendedField zero_hole(Field annulus);

  const Field& annulus() const noexcept { return annulus_; }
  const PolarGrid& grid() const noexcept { return annulus_.grid(); }
  const PointFunction& hole_function() const noexcept { return hole_; }
  double hole(Point p) const { return hole_(p); }
  bool has_zero_hole() const noexcept { return zero_hole_; }

  /// Same hole function, new annulus data.
  ExtendedField with_annulus(Field annulus) const;

 private:
  ExtendedField(Field annulus, PointFunction hole, bool zero_hole);

  Field annulus_;
  PointFunction hole_;
  bool zero_hole_ = false;
};

/// hole_fn on the hole, bilinear (r, theta) interpolation on the annulus.
/// Points slightly beyond r_outer (within geom_tol) clamp to the outer ring;
/// farther points throw DomainViolationError.
double eval_extended(const ExtendedField& u, Point p);

/// Number of hole rings used by default: matches the annulus radial spacing.
int default_hole_rings(const PolarGrid& grid);

/// Area weights for the annulus nodes (exact cell areas, half cells on the
/// boundary rings) and a polar midpoint product rule on the hole.
class QuadratureRule {
 public:
  explicit QuadratureRule(const PolarGrid& grid, int n_r_hole = 0);

  const PolarGrid& grid() const noexcept { return grid_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const Point> hole_points() const noexcept { return hole_points_; }
  std::span<const double> hole_weights() const noexcept { return hole_weights_; }
  int hole_rings() const noexcept { return n_r_hole_; }
  double hole_radius(int k) const;

 private:
  PolarGrid grid_;
  int n_r_hole_;
  std::vector<double> weights_;
  std::vector<Point> hole_points_;
  std::vector<double> hole_weights_;
};

/// Hole sample points of the default rule: radial midpoints
/// (k - 1/2) r_inner / n_r_hole, angles of the annulus grid.
std::vector<Point> hole_lattice(const PolarGrid& grid);

double integrate_omega2(const ExtendedField& u, const QuadratureRule& q);
/// Integral of integrand(x, u(x)) over the outer disk.
double integrate_omega2(const ExtendedField& u, const QuadratureRule& q,
                        const std::function<double(Point, double)>& integrand);

/// Discrete supremum of |u - v| over annulus nodes and the default hole
/// lattice. Throws ConfigError when the grids differ.
double sup_diff(const ExtendedField& u, const ExtendedField& v);
double sup_norm(const ExtendedField& u);

}  // namespace fbvp
