#include "fbvp/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fbvp/errors.hpp"

namespace fbvp {

namespace {

struct Entry {
  std::string raw;
  std::vector<std::string> tokens;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"domain", {"r_inner", "r_outer"}},
      {"grid", {"n_r", "n_theta"}},
      {"operator", {"mu", "drift1", "drift2", "potential", "mu_floor"}},
      {"problem", {"f", "psi", "zeta", "sigma", "B"}},
      {"solver", {"rho", "rhos", "tol", "max_iter", "damping", "initial_guess"}},
      {"hypotheses", {"ell", "b_rho", "lattice"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Parser {
 public:
  explicit Parser(std::string name) : name_(std::move(name)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(name_ + ":" + std::to_string(line) + ": " + msg);
  }

  std::map<std::string, Section> read(std::istream& in) {
    std::map<std::string, Section> out;
    std::string current;
    std::string text;
    int line = 0;
    while (std::getline(in, text)) {
      ++line;
      text = strip_comment(text, line);
      const std::string t = trim(text);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') fail(line, "malformed section header");
        current = trim(std::string_view(t).substr(1, t.size() - 2));
        if (!schema().count(current)) fail(line, "unknown section [" + current + "]");
        if (out.count(current)) fail(line, "duplicate section [" + current + "]");
        out[current];
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      if (current.empty()) fail(line, "key outside of any section");
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string value = trim(std::string_view(t).substr(eq + 1));
      if (key.empty()) fail(line, "empty key");
      if (!schema().at(current).count(key)) fail(line, "unknown key '" + key + "' in [" + current + "]");
      if (value.empty()) fail(line, "empty value for '" + key + "'");
      Section& sec = out[current];
      if (sec.count(key)) fail(line, "duplicate key '" + key + "'");
      sec[key] = Entry{value, tokenize(value, line), line};
    }
    return out;
  }

 private:
  std::string strip_comment(const std::string& text, int line) const {
    bool quoted = false;
    for (std::size_t k = 0; k < text.size(); ++k) {
      if (text[k] == '"') quoted = !quoted;
      if (text[k] == '#' && !quoted) return text.substr(0, k);
    }
    if (quoted) fail(line, "unterminated string");
    return text;
  }

  std::vector<std::string> tokenize(const std::string& value, int line) const {
    std::vector<std::string> tokens;
    std::size_t k = 0;
    while (k < value.size()) {
      if (std::isspace(static_cast<unsigned char>(value[k]))) {
        ++k;
        continue;
      }
      if (value[k] == '"') {
        const auto end = value.find('"', k + 1);
        if (end == std::string::npos) fail(line, "unterminated string");
        tokens.push_back(value.substr(k + 1, end - k - 1));
        k = end + 1;
        continue;
      }
      const auto start = k;
      while (k < value.size() && !std::isspace(static_cast<unsigned char>(value[k])) && value[k] != '"') ++k;
      tokens.push_back(value.substr(start, k - start));
    }
    return tokens;
  }

  std::string name_;
};

class Reader {
 public:
  Reader(const Parser& p, std::map<std::string, Section> sections)
      : parser_(p), sections_(std::move(sections)) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  const Entry& require(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (e == nullptr) parser_.fail(0, "missing required key '" + key + "' in [" + section + "]");
    return *e;
  }

  double number(const Entry& e, const std::string& key, std::size_t token = 0) const {
    if (token >= e.tokens.size()) parser_.fail(e.line, "'" + key + "' is missing a numeric argument");
    return constant(e.tokens[token], e.line, key);
  }

  double constant(const std::string& text, int line, const std::string& key) const {
    try {
      return ScalarFunc::compile(text, {}).eval({});
    } catch (const Error& ex) {
      parser_.fail(line, "'" + key + "': invalid number '" + text + "': " + ex.what());
    }
  }

  int integer(const Entry& e, const std::string& key) const {
    single(e, key);
    const double v = number(e, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) parser_.fail(e.line, "'" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  void single(const Entry& e, const std::string& key) const {
    if (e.tokens.size() != 1) parser_.fail(e.line, "'" + key + "' takes a single value");
  }

  ScalarFunc expression(const std::string& text, int line, const std::string& key,
                        const std::vector<std::string>& vars) const {
    try {
      return ScalarFunc::compile(text, vars);
    } catch (const ConfigError& ex) {
      parser_.fail(line, "'" + key + "': " + ex.what());
    }
  }

  ScalarFunc expression(const Entry& e, const std::string& key,
                        const std::vector<std::string>& vars) const {
    single(e, key);
    return expression(e.tokens[0], e.line, key, vars);
  }

  [[noreturn]] void fail(int line, const std::string& msg) const { parser_.fail(line, msg); }

 private:
  const Parser& parser_;
  std::map<std::string, Section> sections_;
};

// Library-side validation errors carry no location; attach the line.
template <class Fn>
auto located(const Reader& rd, int line, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& ex) {
    rd.fail(line, ex.what());
  }
}

DeviationMap read_sigma(const Reader& rd, const Entry& e) {
  const std::string& kind = e.tokens.at(0);
  auto arity = [&](std::size_t n) {
    if (e.tokens.size() != n + 1) {
      rd.fail(e.line, "sigma '" + kind + "' takes " + std::to_string(n) + " argument(s)");
    }
  };
  if (kind == "identity") {
    arity(0);
    return DeviationMap::identity();
  }
  if (kind == "scale") {
    arity(1);
    const double c = rd.number(e, "sigma", 1);
    return located(rd, e.line, [&] { return DeviationMap::scale(c); });
  }
  if (kind == "rotate") {
    arity(1);
    const double angle = rd.number(e, "sigma", 1);
    return located(rd, e.line, [&] { return DeviationMap::rotate(angle); });
  }
  if (kind == "constant") {
    arity(2);
    return DeviationMap::constant({rd.number(e, "sigma", 1), rd.number(e, "sigma", 2)});
  }
  if (kind == "expr") {
    arity(2);
    return DeviationMap::expressions(rd.expression(e.tokens[1], e.line, "sigma", spatial_vars()),
                                     rd.expression(e.tokens[2], e.line, "sigma", spatial_vars()));
  }
  rd.fail(e.line, "unknown sigma kind '" + kind + "' (identity, scale, rotate, constant, expr)");
}

BoundaryFunctional read_B(const Reader& rd, const Entry& e) {
  const std::string& kind = e.tokens.at(0);
  auto weight = [&](std::size_t token) {
    if (e.tokens.size() <= token) return ScalarFunc::constant(1.0, spatial_vars());
    if (e.tokens.size() > token + 1) rd.fail(e.line, "too many arguments for B '" + kind + "'");
    return rd.expression(e.tokens[token], e.line, "B", spatial_vars());
  };
  if (kind == "power_integral") {
    if (e.tokens.size() < 2) rd.fail(e.line, "B 'power_integral' needs an exponent");
    const double p = rd.number(e, "B", 1);
    ScalarFunc w = weight(2);
    return located(rd, e.line, [&] { return BoundaryFunctional::power_integral(p, w); });
  }
  if (kind == "linear_integral") return BoundaryFunctional::linear_integral(weight(1));
  if (kind == "point_eval") {
    if (e.tokens.size() != 3) rd.fail(e.line, "B 'point_eval' takes 2 coordinates");
    return BoundaryFunctional::point_eval({rd.number(e, "B", 1), rd.number(e, "B", 2)});
  }
  rd.fail(e.line, "unknown B kind '" + kind + "' (power_integral, point_eval, linear_integral)");
}

}  // namespace

ProblemSpec RunConfig::problem() const {
  if (!B) throw ConfigError("configuration has no boundary functional B");
  return ProblemSpec(grid(), op(), f, sigma, psi, zeta, *B);
}

RunConfig parse_config(std::istream& in, const std::string& name) {
  Parser parser(name);
  Reader rd(parser, parser.read(in));
  RunConfig cfg;

  {
    const Entry& a = rd.require("domain", "r_inner");
    const Entry& b = rd.require("domain", "r_outer");
    rd.single(a, "r_inner");
    rd.single(b, "r_outer");
    cfg.r_inner = rd.number(a, "r_inner");
    cfg.r_outer = rd.number(b, "r_outer");
    try {
      (void)cfg.domain();
    } catch (const ConfigError& ex) {
      rd.fail(b.line, ex.what());
    }
  }
  {
    const Entry& a = rd.require("grid", "n_r");
    const Entry& b = rd.require("grid", "n_theta");
    cfg.n_r = rd.integer(a, "n_r");
    cfg.n_theta = rd.integer(b, "n_theta");
    try {
      (void)cfg.grid();
    } catch (const ConfigError& ex) {
      rd.fail(cfg.n_r < 2 ? a.line : b.line, ex.what());
    }
  }

  const auto& sv = spatial_vars();
  if (const Entry* e = rd.find("operator", "mu")) cfg.mu = rd.expression(*e, "mu", sv);
  if (const Entry* e = rd.find("operator", "drift1")) cfg.drift1 = rd.expression(*e, "drift1", sv);
  if (const Entry* e = rd.find("operator", "drift2")) cfg.drift2 = rd.expression(*e, "drift2", sv);
  if (const Entry* e = rd.find("operator", "potential")) cfg.potential = rd.expression(*e, "potential", sv);
  if (const Entry* e = rd.find("operator", "mu_floor")) {
    rd.single(*e, "mu_floor");
    cfg.mu_floor = rd.number(*e, "mu_floor");
    if (!(cfg.mu_floor > 0.0)) rd.fail(e->line, "'mu_floor' must be positive");
  }

  cfg.f = rd.expression(rd.require("problem", "f"), "f", nonlinearity_vars());
  if (const Entry* e = rd.find("problem", "psi")) cfg.psi = rd.expression(*e, "psi", sv);
  if (const Entry* e = rd.find("problem", "zeta")) cfg.zeta = rd.expression(*e, "zeta", sv);
  if (const Entry* e = rd.find("problem", "sigma")) cfg.sigma = read_sigma(rd, *e);
  cfg.B = read_B(rd, rd.require("problem", "B"));

  if (const Entry* e = rd.find("solver", "rho")) {
    rd.single(*e, "rho");
    cfg.rhos = {rd.number(*e, "rho")};
    if (!(cfg.rhos[0] > 0.0)) rd.fail(e->line, "'rho' must be positive");
  }
  if (const Entry* e = rd.find("solver", "rhos")) {
    if (rd.find("solver", "rho")) rd.fail(e->line, "give either 'rho' or 'rhos', not both");
    cfg.rhos.clear();
    std::stringstream ss(e->raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double v = rd.constant(trim(item), e->line, "rhos");
      if (!(v > 0.0)) rd.fail(e->line, "'rhos' entries must be positive");
      if (!cfg.rhos.empty() && !(v > cfg.rhos.back())) rd.fail(e->line, "'rhos' must be strictly increasing");
      cfg.rhos.push_back(v);
    }
  }
  if (const Entry* e = rd.find("solver", "tol")) {
    rd.single(*e, "tol");
    cfg.solver.tol = rd.number(*e, "tol");
  }
  if (const Entry* e = rd.find("solver", "max_iter")) cfg.solver.max_iter = rd.integer(*e, "max_iter");
  if (const Entry* e = rd.find("solver", "damping")) {
    rd.single(*e, "damping");
    cfg.solver.damping = rd.number(*e, "damping");
  }
  if (const Entry* e = rd.find("solver", "initial_guess")) {
    rd.single(*e, "initial_guess");
    if (e->tokens[0] == "gamma_tilde") {
      cfg.solver.initial_guess = InitialGuess::GammaTildeScaled;
    } else if (e->tokens[0] == "constant_shell") {
      cfg.solver.initial_guess = InitialGuess::ConstantShell;
    } else {
      rd.fail(e->line, "'initial_guess' must be gamma_tilde or constant_shell");
    }
  }
  try {
    cfg.solver.validate();
  } catch (const ConfigError& ex) {
    rd.fail(0, ex.what());
  }

  if (const Entry* e = rd.find("hypotheses", "ell")) {
    cfg.ell = rd.expression(*e, "ell", {"x1", "x2", "rho"});
  }
  if (const Entry* e = rd.find("hypotheses", "b_rho")) {
    rd.single(*e, "b_rho");
    cfg.b_rho = rd.number(*e, "b_rho");
    if (!(cfg.b_rho >= 0.0)) rd.fail(e->line, "'b_rho' must be nonnegative");
  }
  if (const Entry* e = rd.find("hypotheses", "lattice")) {
    cfg.lattice = rd.integer(*e, "lattice");
    if (cfg.lattice < 2) rd.fail(e->line, "'lattice' must be at least 2");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace fbvp
