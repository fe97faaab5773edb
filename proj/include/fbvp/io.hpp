#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fbvp/bk_solver.hpp"
#include "fbvp/geometry.hpp"

namespace fbvp::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Header "i,j,r,theta,x1,x2,value", one line per annulus node.
void write_field(std::ostream& out, const Field& f);
/// As write_field, followed by the hole lattice with i = -1.
void write_field(std::ostream& out, const ExtendedField& f);

/// Header "rho,lambda,iterations,fp_residual"; failed entries leave the last
/// three columns empty.
void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& entries);

}  // namespace fbvp::io
