#pragma once

#include <string>
#include <vector>

#include "fbvp/elliptic.hpp"
#include "fbvp/radial_oracle.hpp"

namespace fbvp {

/// The three radially symmetric Dirichlet problems for -Lap with closed forms.
enum class ClosedFormCase {
  Torsion,  // -Lap u = 1, u = 0 on both circles
  Gamma,    // -Lap u = 0, u = 0 inside, 1 outside
  Delta,    // -Lap u = 0, u = 1 inside, 0 outside
};

ClosedFormCase parse_closed_form_case(const std::string& name);
radial::RadialProfile closed_form_profile(ClosedFormCase c, const AnnularDomain& d);
/// Discrete 2D solution of the case on `grid`.
Field solve_closed_form_case(ClosedFormCase c, const PolarGrid& grid);

struct RefinementRow {
  int n_r = 0;
  int n_theta = 0;
  double max_error = 0.0;     // max nodal |discrete - closed form|
  double ratio = 0.0;         // previous row's error / this row's error (0 on the first row)
  double discrete_sup = 0.0;  // max nodal |discrete|
};

/// Solves on (n_r, n_theta) and `levels - 1` successive halvings of both
/// spacings.
std::vector<RefinementRow> refinement_study(ClosedFormCase c, const AnnularDomain& d, int n_r,
                                            int n_theta, int levels = 2);

}  // namespace fbvp
