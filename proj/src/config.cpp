#include "topmg/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "topmg/errors.hpp"

namespace topmg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ", ";
    s += fmt(vs[i]);
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ", key '" + key +
                    "': " + what);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') fail(line, key, "cannot parse '" + v + "' as a number");
  return d;
}

int parse_int(const std::string& v, int line, const std::string& key) {
  char* end = nullptr;
  const long d = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') fail(line, key, "cannot parse '" + v + "' as an integer");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail(line, key, "cannot parse '" + v + "' as a boolean");
}

std::vector<double> parse_list(const std::string& v, int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, key, "empty list entry");
    out.push_back(parse_double(item, line, key));
  }
  if (out.empty()) fail(line, key, "empty list");
  return out;
}

void parse_mesh(const std::string& v, int line, const std::string& key, int& nx, int& ny) {
  const std::size_t x = v.find('x');
  if (x == std::string::npos) fail(line, key, "expected NXxNY, got '" + v + "'");
  nx = parse_int(trim(v.substr(0, x)), line, key);
  ny = parse_int(trim(v.substr(x + 1)), line, key);
}

}  // namespace

Method parse_method(const std::string& name) {
  std::string n = name;
  for (char& c : n) {
    if (c == '_') c = '-';
  }
  if (n == "cholesky") return Method::cholesky;
  if (n == "jacobi") return Method::jacobi;
  if (n == "damped-jacobi") return Method::damped_jacobi;
  if (n == "gauss-seidel") return Method::gauss_seidel;
  if (n == "cg") return Method::cg;
  if (n == "pcgmg") return Method::pcgmg;
  throw ConfigError("unknown method '" + name + "'");
}

MaterialModel RunConfig::material() const {
  MaterialModel m;
  m.phase_moduli = moduli;
  m.poisson_ratio = poisson_ratio;
  m.penalty = penalty;
  return m;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.method = method;
  s.tol = cg_tol;
  s.max_iter = cg_max;
  s.omega = omega;
  s.gamma = gamma;
  s.pre_sweeps = sweeps;
  s.post_sweeps = sweeps;
  s.num_coarsenings = mg_levels;
  return s;
}

OptimConfig RunConfig::optim_config() const {
  OptimConfig o;
  o.volume_fractions = volume_fractions;
  o.filter_radius = filter_radius;
  o.filter_tol = filter_tol;
  o.tol = tol;
  o.inner_sweeps = inner_sweeps;
  o.move_limit = move_limit;
  o.oc_damping = oc_damping;
  o.warm_start = warm_start;
  o.solver = solver_config();
  return o;
}

std::string RunConfig::resolved_out_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("TOPOPT_OUT"); env && *env) return env;
  return "out";
}

void validate(const RunConfig& cfg) {
  if (cfg.mesh_nx < 1 || cfg.mesh_ny < 1) {
    throw ConfigError("mesh must have at least one element per direction");
  }
  if (cfg.moduli.size() != cfg.volume_fractions.size()) {
    throw ConfigError("moduli has " + std::to_string(cfg.moduli.size()) +
                      " entries but volume_fractions has " +
                      std::to_string(cfg.volume_fractions.size()));
  }
  if (cfg.mg_levels < 0) throw ConfigError("mg_levels must be >= 0");
  if (cfg.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(cfg.source == cfg.source)) throw ConfigError("source must be a number");
  cfg.material().validate();
  cfg.solver_config().validate();
  cfg.optim_config().validate();
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  RunConfig cfg = std::move(base);
  std::map<std::string, int> key_lines;

  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;

    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected key = value, got '" + raw + "'");
    }
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    key_lines[key] = line;

    if (key == "mesh") {
      parse_mesh(value, line, key, cfg.mesh_nx, cfg.mesh_ny);
    } else if (key == "method") {
      try {
        cfg.method = parse_method(value);
      } catch (const ConfigError& e) {
        fail(line, key, e.what());
      }
    } else if (key == "tol") {
      cfg.tol = parse_double(value, line, key);
    } else if (key == "cgtol") {
      cfg.cg_tol = parse_double(value, line, key);
    } else if (key == "cg_max") {
      cfg.cg_max = parse_int(value, line, key);
    } else if (key == "max_iter") {
      cfg.max_iter = parse_int(value, line, key);
    } else if (key == "omega") {
      cfg.omega = parse_double(value, line, key);
    } else if (key == "gamma") {
      cfg.gamma = parse_int(value, line, key);
    } else if (key == "sweeps") {
      cfg.sweeps = parse_int(value, line, key);
    } else if (key == "mg_levels") {
      cfg.mg_levels = parse_int(value, line, key);
    } else if (key == "moduli") {
      cfg.moduli = parse_list(value, line, key);
    } else if (key == "volume_fractions") {
      cfg.volume_fractions = parse_list(value, line, key);
    } else if (key == "penalty") {
      cfg.penalty = parse_double(value, line, key);
    } else if (key == "poisson_ratio") {
      cfg.poisson_ratio = parse_double(value, line, key);
    } else if (key == "filter_radius") {
      cfg.filter_radius = parse_double(value, line, key);
    } else if (key == "filter_tol") {
      cfg.filter_tol = parse_double(value, line, key);
    } else if (key == "move_limit") {
      cfg.move_limit = parse_double(value, line, key);
    } else if (key == "oc_damping") {
      cfg.oc_damping = parse_double(value, line, key);
    } else if (key == "inner_sweeps") {
      cfg.inner_sweeps = parse_int(value, line, key);
    } else if (key == "warm_start") {
      cfg.warm_start = parse_bool(value, line, key);
    } else if (key == "source") {
      cfg.source = parse_double(value, line, key);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "images") {
      cfg.images = parse_bool(value, line, key);
    } else if (key == "csv") {
      cfg.csv = parse_bool(value, line, key);
    } else {
      fail(line, key, "unknown key");
    }
  }

  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    // attribute the violation to the key's line when it came from this file
    for (const auto& [key, key_line] : key_lines) {
      if (std::string(e.what()).find(key) != std::string::npos) {
        fail(key_line, key, e.what());
      }
    }
    throw;
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string write_config(const RunConfig& cfg) {
  std::string s;
  s += "mesh = " + std::to_string(cfg.mesh_nx) + "x" + std::to_string(cfg.mesh_ny) + "\n";
  s += "method = " + method_name(cfg.method) + "\n";
  s += "tol = " + fmt(cfg.tol) + "\n";
  s += "cgtol = " + fmt(cfg.cg_tol) + "\n";
  s += "cg_max = " + std::to_string(cfg.cg_max) + "\n";
  s += "max_iter = " + std::to_string(cfg.max_iter) + "\n";
  s += "omega = " + fmt(cfg.omega) + "\n";
  s += "gamma = " + std::to_string(cfg.gamma) + "\n";
  s += "sweeps = " + std::to_string(cfg.sweeps) + "\n";
  s += "mg_levels = " + std::to_string(cfg.mg_levels) + "\n";
  s += "moduli = " + fmt_list(cfg.moduli) + "\n";
  s += "volume_fractions = " + fmt_list(cfg.volume_fractions) + "\n";
  s += "penalty = " + fmt(cfg.penalty) + "\n";
  s += "poisson_ratio = " + fmt(cfg.poisson_ratio) + "\n";
  s += "filter_radius = " + fmt(cfg.filter_radius) + "\n";
  s += "filter_tol = " + fmt(cfg.filter_tol) + "\n";
  s += "move_limit = " + fmt(cfg.move_limit) + "\n";
  s += "oc_damping = " + fmt(cfg.oc_damping) + "\n";
  s += "inner_sweeps = " + std::to_string(cfg.inner_sweeps) + "\n";
  s += std::string("warm_start = ") + (cfg.warm_start ? "true" : "false") + "\n";
  s += "source = " + fmt(cfg.source) + "\n";
  if (!cfg.out_dir.empty()) s += "out_dir = " + cfg.out_dir + "\n";
  s += std::string("images = ") + (cfg.images ? "true" : "false") + "\n";
  s += std::string("csv = ") + (cfg.csv ? "true" : "false") + "\n";
  return s;
}

}  // namespace topmg
