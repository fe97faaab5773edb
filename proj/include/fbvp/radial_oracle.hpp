#pragma once

// Closed forms and a 1D finite-difference solver for radially symmetric
// Dirichlet problems  -u'' - u'/r = load  on [R1, R2].

#include <functional>
#include <vector>

namespace fbvp::radial {

struct RadialProfile {
  enum class Kind { Harmonic, Torsion };

  Kind kind = Kind::Harmonic;
  double load = 0.0;  // c for torsion, 0 for harmonic
  double A = 0.0;     // harmonic: constant term; torsion: ln r coefficient
  double B = 0.0;     // harmonic: ln r coefficient; torsion: constant term
  double R1 = 1.0;
  double R2 = 2.0;

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;
  /// -u'' - u'/r, from the symbolic derivatives.
  double radial_operator(double r) const;
};

/// A + B ln r with value alpha at R1 and beta at R2.
RadialProfile harmonic_closed_form(double R1, double R2, double alpha, double beta);

/// -c r^2/4 + A ln r + B, vanishing at R1 and R2.
RadialProfile torsion_closed_form(double R1, double R2, double c);

struct RadialSup {
  double r_star = 0.0;
  double value = 0.0;
};

/// Maximum of |p| over [R1, R2]: the interior stationary point when one
/// exists, otherwise the larger endpoint.
RadialSup radial_sup(const RadialProfile& p);

struct RadialSamples {
  std::vector<double> r;
  std::vector<double> u;
};

/// Centered differences for -u'' - u'/r = load(r) on n + 1 uniform nodes,
/// Dirichlet values alpha at R1 and beta at R2, tridiagonal elimination.
RadialSamples radial_fd_solve(double R1, double R2, const std::function<double(double)>& load,
                              double alpha, double beta, int n);
RadialSamples radial_fd_solve(double R1, double R2, double load, double alpha, double beta, int n);

}  // namespace fbvp::radial
