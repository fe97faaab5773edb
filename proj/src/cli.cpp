#include "fbvp/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fbvp/config.hpp"
#include "fbvp/errors.hpp"
#include "fbvp/io.hpp"
#include "fbvp/studies.hpp"

namespace fbvp::cli {

namespace {

using io::format_double;

std::vector<double> parse_rho_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(ScalarFunc::compile(item, {}).eval({}));
    } catch (const Error& e) {
      throw ConfigError("invalid --rhos entry '" + item + "': " + e.what());
    }
  }
  if (out.empty()) throw ConfigError("--rhos is empty");
  return out;
}

double pick_rho(const RunConfig& cfg, const std::optional<double>& flag) {
  if (flag) return *flag;
  if (cfg.rhos.size() == 1) return cfg.rhos.front();
  if (cfg.rhos.empty()) throw ConfigError("no rho given: pass --rho or set [solver] rho");
  throw ConfigError("config lists several rho values; pass --rho");
}

template <class Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  fn(file);
  if (!file) throw ConfigError("error while writing '" + path + "'");
}

int cmd_solve(const std::string& config, std::optional<double> rho_flag, const std::string& out_path,
              std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const double rho = pick_rho(cfg, rho_flag);
  const ProblemSpec spec = cfg.problem();
  const AuxSolutions aux = spec.build_aux();
  const SolutionPair pair = solve_pair(spec, aux, rho, cfg.solver);
  const ResidualReport rep = residual_report(spec, aux, pair);
  out << "rho=" << format_double(pair.rho) << " lambda=" << format_double(pair.lambda)
      << " iterations=" << pair.iterations << " fp_residual=" << format_double(pair.fp_residual)
      << " cone_violation=" << format_double(pair.cone_violation)
      << " norm_deviation=" << format_double(pair.norm_deviation)
      << " pde_defect=" << format_double(rep.pde_defect)
      << " outer_defect=" << format_double(rep.outer_defect) << '\n';
  with_output(out_path, out, [&](std::ostream& o) { io::write_field(o, pair.u); });
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& rhos_flag, const std::string& out_path,
              int jobs, bool no_warm_start, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config);
  const std::vector<double> rhos = rhos_flag.empty() ? cfg.rhos : parse_rho_list(rhos_flag);
  if (rhos.empty()) throw ConfigError("no rho values: pass --rhos or set [solver] rhos");
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (!(rhos[k] > 0.0) || (k > 0 && !(rhos[k] > rhos[k - 1]))) {
      throw ConfigError("rho values must be positive and strictly increasing");
    }
  }
  if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  const ProblemSpec spec = cfg.problem();
  const AuxSolutions aux = spec.build_aux();
  SweepOptions so;
  so.warm_start = !no_warm_start && jobs == 1;
  so.jobs = jobs;
  const auto entries = sweep(spec, aux, rhos, cfg.solver, so);
  with_output(out_path, out, [&](std::ostream& o) { io::write_sweep_csv(o, entries); });
  int status = 0;
  for (const auto& e : entries) {
    if (!e.error.empty()) {
      err << "rho=" << format_double(e.rho) << ": " << e.error << '\n';
      status = 2;
    }
  }
  return status;
}

int cmd_check(const std::string& config, std::optional<double> rho_flag,
              std::optional<double> b_rho_flag, std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const double rho = pick_rho(cfg, rho_flag);
  if (!cfg.ell) throw ConfigError("config has no [hypotheses] ell");
  const double b_rho = b_rho_flag.value_or(cfg.b_rho);
  const ProblemSpec spec = cfg.problem();
  const AuxSolutions aux = spec.build_aux();
  const HypothesisReport rep = check_hypotheses(spec, aux, rho, *cfg.ell, b_rho, cfg.lattice);
  out << "rho=" << format_double(rep.rho) << '\n'
      << "b_rho=" << format_double(rep.b_rho) << '\n'
      << "d_rho=" << format_double(rep.d_rho) << '\n'
      << "satisfied=" << (rep.satisfied ? "true" : "false") << '\n'
      << "phi_sup=" << format_double(rep.phi_sup) << '\n'
      << "lower_bound=" << (rep.lower_bound_holds ? "holds" : "violated") << '\n'
      << "lower_bound_method=sampling\n"
      << "lower_bound_samples=" << rep.lower_bound_samples << '\n';
  if (rep.first_violation) out << "first_violation=" << *rep.first_violation << '\n';
  return 0;
}

int cmd_aux(const std::string& config, const std::string& out_dir, std::ostream& out) {
  const RunConfig cfg = load_config(config);
  const ProblemSpec spec = cfg.problem();
  const AuxSolutions aux = spec.build_aux();
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out_dir + "'");
  auto dump = [&](const std::string& name, auto&& field) {
    const std::string path = (dir / (name + ".csv")).string();
    with_output(path, out, [&](std::ostream& o) { io::write_field(o, field); });
    out << name << '=' << path << '\n';
  };
  dump("delta", aux.delta);
  dump("gamma", aux.gamma);
  dump("phi", aux.phi);
  dump("gamma_tilde", aux.gamma_tilde);
  return 0;
}

int cmd_oracle(const std::string& config, const std::string& which, int levels, std::ostream& out) {
  const ClosedFormCase c = parse_closed_form_case(which);
  const RunConfig cfg = load_config(config);
  if (levels < 2) throw ConfigError("--levels must be at least 2");
  const auto rows = refinement_study(c, cfg.domain(), cfg.n_r, cfg.n_theta, levels);
  out << "n_r,n_theta,max_error,ratio,discrete_sup\n";
  for (const auto& r : rows) {
    out << r.n_r << ',' << r.n_theta << ',' << format_double(r.max_error) << ','
        << format_double(r.ratio) << ',' << format_double(r.discrete_sup) << '\n';
  }
  const auto sup = radial::radial_sup(closed_form_profile(c, cfg.domain()));
  out << "closed_form_sup=" << format_double(sup.value) << '\n'
      << "closed_form_r_star=" << format_double(sup.r_star) << '\n'
      << "discrete_sup=" << format_double(rows.front().discrete_sup) << '\n'
      << "convergence_ratio=" << format_double(rows.back().ratio) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parameter-dependent elliptic functional BVPs on annuli"};
  app.require_subcommand(1);

  std::string config;
  std::optional<double> rho;
  std::optional<double> b_rho;
  std::string rhos;
  std::string out_path;
  std::string out_dir = ".";
  std::string which;
  int jobs = 1;
  int levels = 2;
  bool no_warm_start = false;

  auto* solve = app.add_subcommand("solve", "Solve for one (u, lambda) pair");
  solve->add_option("--config", config, "Configuration file")->required();
  solve->add_option("--rho", rho, "Radius of the sphere around phi");
  out_path = "solution.csv";
  solve->add_option("--out", out_path, "Field dump path ('-' for stdout)");

  auto* sw = app.add_subcommand("sweep", "Solve for a list of rho values");
  sw->add_option("--config", config, "Configuration file")->required();
  sw->add_option("--rhos", rhos, "Comma separated, strictly increasing");
  std::string sweep_out = "-";
  sw->add_option("--out", sweep_out, "CSV path ('-' for stdout)");
  sw->add_option("--jobs", jobs, "Parallel solves (disables warm starts when > 1)");
  sw->add_flag("--no-warm-start", no_warm_start, "Start every rho from the default guess");

  auto* check = app.add_subcommand("check", "Evaluate the existence hypotheses for one rho");
  check->add_option("--config", config, "Configuration file")->required();
  check->add_option("--rho", rho, "Radius of the sphere around phi");
  check->add_option("--b-rho", b_rho, "Lower bound of B on the sphere");

  auto* aux = app.add_subcommand("aux", "Dump delta, gamma, phi and gamma_tilde");
  aux->add_option("--config", config, "Configuration file")->required();
  aux->add_option("--out-dir", out_dir, "Output directory");

  auto* oracle = app.add_subcommand("oracle", "Closed-form versus discrete comparison for -Lap");
  oracle->add_option("--config", config, "Configuration file (domain and grid)")->required();
  oracle->add_option("--case", which, "torsion, gamma or delta")->required();
  oracle->add_option("--levels", levels, "Number of grids, each halving the spacing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << '\n';
    return 1;
  }

  try {
    if (*solve) return cmd_solve(config, rho, out_path, out);
    if (*sw) return cmd_sweep(config, rhos, sweep_out, jobs, no_warm_start, out, err);
    if (*check) return cmd_check(config, rho, b_rho, out);
    if (*aux) return cmd_aux(config, out_dir, out);
    if (*oracle) return cmd_oracle(config, which, levels, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\niterations=" << e.iterations()
        << " last_step=" << format_double(e.last_step())
        << " last_lambda=" << format_double(e.last_lambda()) << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace fbvp::cli
