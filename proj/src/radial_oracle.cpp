#include "fbvp/radial_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbvp/errors.hpp"

namespace fbvp::radial {

namespace {
void require_interval(double R1, double R2) {
  if (!(R1 > 0.0) || !(R2 > R1)) {
    throw ConfigError("radial interval needs 0 < R1 < R2, got [" + std::to_string(R1) + ", " +
                      std::to_string(R2) + "]");
  }
}
}  // namespace

double RadialProfile::value(double r) const {
  if (kind == Kind::Harmonic) return A + B * std::log(r);
  return -load * r * r / 4.0 + A * std::log(r) + B;
}

double RadialProfile::derivative(double r) const {
  if (kind == Kind::Harmonic) return B / r;
  return -load * r / 2.0 + A / r;
}

double RadialProfile::second_derivative(double r) const {
  if (kind == Kind::Harmonic) return -B / (r * r);
  return -load / 2.0 - A / (r * r);
}

double RadialProfile::radial_operator(double r) const {
  return -second_derivative(r) - derivative(r) / r;
}

RadialProfile harmonic_closed_form(double R1, double R2, double alpha, double beta) {
  require_interval(R1, R2);
  RadialProfile p;
  p.kind = RadialProfile::Kind::Harmonic;
  p.R1 = R1;
  p.R2 = R2;
  p.B = (beta - alpha) / std::log(R2 / R1);
  p.A = alpha - p.B * std::log(R1);
  return p;
}

RadialProfile torsion_closed_form(double R1, double R2, double c) {
  require_interval(R1, R2);
  RadialProfile p;
  p.kind = RadialProfile::Kind::Torsion;
  p.load = c;
  p.R1 = R1;
  p.R2 = R2;
  p.A = c * (R2 * R2 - R1 * R1) / (4.0 * std::log(R2 / R1));
  p.B = c * R1 * R1 / 4.0 - p.A * std::log(R1);
  return p;
}

RadialSup radial_sup(const RadialProfile& p) {
  RadialSup best{p.R1, std::abs(p.value(p.R1))};
  const double right = std::abs(p.value(p.R2));
  if (right > best.value) best = {p.R2, right};
  // Harmonic profiles are monotone. A torsion profile has u' = 0 at r^2 = 2A/c.
  if (p.kind == RadialProfile::Kind::Torsion && p.load != 0.0) {
    const double r2 = 2.0 * p.A / p.load;
    if (r2 > 0.0) {
      const double r = std::sqrt(r2);
      if (r > p.R1 && r < p.R2) {
        const double v = std::abs(p.value(r));
        if (v > best.value) best = {r, v};
      }
    }
  }
  return best;
}

RadialSamples radial_fd_solve(double R1, double R2, const std::function<double(double)>& load,
                              double alpha, double beta, int n) {
  require_interval(R1, R2);
  if (n < 4) throw ConfigError("radial_fd_solve needs n >= 4");
  const double h = (R2 - R1) / n;
  RadialSamples s;
  s.r.resize(n + 1);
  s.u.assign(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) s.r[k] = k == n ? R2 : R1 + k * h;
  s.u[0] = alpha;
  s.u[n] = beta;

  // Interior unknowns 1..n-1: lower u_{k-1} + diag u_k + upper u_{k+1} = rhs.
  const int m = n - 1;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (int k = 1; k <= m; ++k) {
    const double r = s.r[k];
    lower[k - 1] = -1.0 / (h * h) + 1.0 / (2.0 * r * h);
    diag[k - 1] = 2.0 / (h * h);
    upper[k - 1] = -1.0 / (h * h) - 1.0 / (2.0 * r * h);
    rhs[k - 1] = load(r);
  }
  rhs[0] -= lower[0] * alpha;
  rhs[m - 1] -= upper[m - 1] * beta;

  for (int k = 1; k < m; ++k) {
    if (diag[k - 1] == 0.0) throw SolverError("singular tridiagonal system", 0.0);
    const double factor = lower[k] / diag[k - 1];
    diag[k] -= factor * upper[k - 1];
    rhs[k] -= factor * rhs[k - 1];
  }
  if (diag[m - 1] == 0.0) throw SolverError("singular tridiagonal system", 0.0);
  s.u[m] = rhs[m - 1] / diag[m - 1];
  for (int k = m - 1; k >= 1; --k) s.u[k] = (rhs[k - 1] - upper[k - 1] * s.u[k + 1]) / diag[k - 1];
  return s;
}

RadialSamples radial_fd_solve(double R1, double R2, double load, double alpha, double beta, int n) {
  return radial_fd_solve(R1, R2, [load](double) { return load; }, alpha, beta, n);
}

}  // namespace fbvp::radial
