#include "hq/config.hpp"

#include <fstream>
#include <sstream>

namespace hq {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

}  // namespace

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double("list", item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<int>(to_long("list", item)));
  }
  return out;
}

std::string documented_keys() {
  return "n, k, l, shape, size, m, m_list, psi, subsolution, exact, "
         "eps_schedule, newton_tol, max_iters, seed, sample_count, threads, "
         "out, theta, K, eta0, delta, t, N, b, R";
}

void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "n") {
    cfg.op.n = static_cast<int>(to_long(key, value));
    cfg.dom.n = cfg.op.n;
  } else if (key == "k") {
    cfg.op.k = static_cast<int>(to_long(key, value));
  } else if (key == "l") {
    cfg.op.l = static_cast<int>(to_long(key, value));
  } else if (key == "shape") {
    if (value == "square") {
      cfg.dom.shape = Shape::square;
    } else if (value == "disc") {
      cfg.dom.shape = Shape::disc;
    } else {
      throw ConfigError("config: shape must be 'square' or 'disc', got '" +
                        value + "'");
    }
  } else if (key == "size") {
    cfg.dom.size = to_double(key, value);
  } else if (key == "m") {
    cfg.m = static_cast<int>(to_long(key, value));
  } else if (key == "m_list") {
    cfg.m_list = parse_int_list(value);
  } else if (key == "psi") {
    cfg.psi_spec = value;
  } else if (key == "subsolution") {
    cfg.subsolution = value;
  } else if (key == "exact") {
    cfg.exact = value;
  } else if (key == "eps_schedule") {
    cfg.solver.eps_schedule = parse_double_list(value);
  } else if (key == "newton_tol") {
    cfg.solver.newton_tol = to_double(key, value);
  } else if (key == "max_iters") {
    cfg.solver.max_iters = static_cast<int>(to_long(key, value));
  } else if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(to_long(key, value));
  } else if (key == "sample_count") {
    cfg.sample_count = static_cast<int>(to_long(key, value));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(to_long(key, value));
    cfg.solver.threads = cfg.threads;
  } else if (key == "out") {
    cfg.output_dir = value;
  } else if (key == "theta") {
    cfg.barrier.theta = to_double(key, value);
    cfg.barrier_given = true;
  } else if (key == "K") {
    cfg.barrier.K = to_double(key, value);
    cfg.barrier_given = true;
  } else if (key == "eta0") {
    cfg.barrier.eta0 = to_double(key, value);
    cfg.barrier_given = true;
  } else if (key == "delta") {
    cfg.barrier.delta = to_double(key, value);
    cfg.barrier_given = true;
  } else if (key == "t") {
    cfg.barrier.t = to_double(key, value);
  } else if (key == "N") {
    cfg.barrier.N = to_double(key, value);
  } else if (key == "b") {
    cfg.barrier.b = to_double(key, value);
  } else if (key == "R") {
    cfg.barrier.R_mult = to_double(key, value);
  } else {
    throw ConfigError("config: unknown key '" + key +
                      "'; documented keys: " + documented_keys());
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not of the form key = value");
    }
    apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

PsiModel make_psi(const std::string& spec, int power) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) params = parse_double_list(spec.substr(colon + 1));
  auto param = [&](size_t i, double dflt) {
    return i < params.size() ? params[i] : dflt;
  };
  if (kind == "constant") return PsiModel::constant(param(0, 1.0), power);
  if (kind == "radial_bump") {
    return PsiModel::radial_bump(param(0, 1.0), param(1, 0.3), power);
  }
  if (kind == "normal_dependent") {
    return PsiModel::normal_dependent(param(0, 1.0), param(1, 0.0),
                                      param(2, 0.0), power);
  }
  throw ConfigError(
      "config: unknown psi kind '" + kind +
      "'; known kinds: constant, radial_bump, normal_dependent (the "
      "manufactured kind is built by the 'manufactured' command)");
}

}  // namespace hq
