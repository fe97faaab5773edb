#include "fbvp/io.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace fbvp::io {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

namespace {

void write_annulus(std::ostream& out, const Field& f) {
  const PolarGrid& g = f.grid();
  out << "i,j,r,theta,x1,x2,value\n";
  for (int i = 0; i <= g.n_r(); ++i) {
    const double r = i == g.n_r() ? g.domain().r_outer() : g.r(i);
    for (int j = 0; j < g.n_theta(); ++j) {
      const Point p = g.node_position(i, j);
      out << i << ',' << j << ',' << format_double(r) << ',' << format_double(g.theta(j)) << ','
          << format_double(p.x1) << ',' << format_double(p.x2) << ',' << format_double(f(i, j))
          << '\n';
    }
  }
}

}  // namespace

void write_field(std::ostream& out, const Field& f) { write_annulus(out, f); }

void write_field(std::ostream& out, const ExtendedField& f) {
  write_annulus(out, f.annulus());
  const QuadratureRule q(f.grid());
  const PolarGrid& g = f.grid();
  auto pts = q.hole_points();
  for (int k = 0; k < q.hole_rings(); ++k) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const Point p = pts[static_cast<std::size_t>(k) * g.n_theta() + j];
      out << "-1," << j << ',' << format_double(q.hole_radius(k)) << ','
          << format_double(g.theta(j)) << ',' << format_double(p.x1) << ','
          << format_double(p.x2) << ',' << format_double(f.hole(p)) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& entries) {
  out << "rho,lambda,iterations,fp_residual\n";
  for (const auto& e : entries) {
    out << format_double(e.rho) << ',';
    if (e.pair) {
      out << format_double(e.pair->lambda) << ',' << e.pair->iterations << ','
          << format_double(e.pair->fp_residual);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace fbvp::io
