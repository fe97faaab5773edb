#include "fbvp/studies.hpp"

#include <algorithm>
#include <cmath>

#include "fbvp/errors.hpp"

namespace fbvp {

ClosedFormCase parse_closed_form_case(const std::string& name) {
  if (name == "torsion") return ClosedFormCase::Torsion;
  if (name == "gamma") return ClosedFormCase::Gamma;
  if (name == "delta") return ClosedFormCase::Delta;
  throw ConfigError("unknown oracle case '" + name + "' (torsion, gamma, delta)");
}

radial::RadialProfile closed_form_profile(ClosedFormCase c, const AnnularDomain& d) {
  switch (c) {
    case ClosedFormCase::Torsion: return radial::torsion_closed_form(d.r_inner(), d.r_outer(), 1.0);
    case ClosedFormCase::Gamma: return radial::harmonic_closed_form(d.r_inner(), d.r_outer(), 0.0, 1.0);
    case ClosedFormCase::Delta: return radial::harmonic_closed_form(d.r_inner(), d.r_outer(), 1.0, 0.0);
  }
  return {};
}

Field solve_closed_form_case(ClosedFormCase c, const PolarGrid& grid) {
  const DiscreteSystem sys = assemble(EllipticOperator::laplacian(), grid);
  const PointFunction zero = [](Point) { return 0.0; };
  const PointFunction one = [](Point) { return 1.0; };
  switch (c) {
    case ClosedFormCase::Torsion: return solve_dirichlet(sys, Field(grid, 1.0), zero, zero);
    case ClosedFormCase::Gamma: return solve_dirichlet(sys, Field(grid), zero, one);
    case ClosedFormCase::Delta: return solve_dirichlet(sys, Field(grid), one, zero);
  }
  return Field(grid);
}

std::vector<RefinementRow> refinement_study(ClosedFormCase c, const AnnularDomain& d, int n_r,
                                            int n_theta, int levels) {
  if (levels < 1) throw ConfigError("refinement study needs at least one level");
  const radial::RadialProfile exact = closed_form_profile(c, d);
  std::vector<RefinementRow> rows;
  for (int level = 0; level < levels; ++level) {
    const PolarGrid grid(d, n_r << level, n_theta << level);
    const Field u = solve_closed_form_case(c, grid);
    RefinementRow row;
    row.n_r = grid.n_r();
    row.n_theta = grid.n_theta();
    for (int i = 0; i <= grid.n_r(); ++i) {
      const double r = i == grid.n_r() ? d.r_outer() : grid.r(i);
      const double ref = exact.value(r);
      for (int j = 0; j < grid.n_theta(); ++j) {
        row.max_error = std::max(row.max_error, std::abs(u(i, j) - ref));
        row.discrete_sup = std::max(row.discrete_sup, std::abs(u(i, j)));
      }
    }
    if (!rows.empty() && row.max_error > 0.0) row.ratio = rows.back().max_error / row.max_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fbvp
