#pragma once

#include "hq/barrier.hpp"
#include "hq/pde_operator.hpp"
#include "hq/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hq {

/// One run of the harness, populated from a flat `key = value` config file
/// and/or command-line overrides.
struct RunConfig {
  std::string command = "solve";
  DomainSpec dom{Shape::disc, 1.0, 2};
  OperatorSpec op{2, 1, 0};
  std::string psi_spec = "constant:1";
  std::string subsolution = "builtin";  // or "cap:R"
  std::string exact = "cap";            // manufactured benchmark field
  SolverConfig solver;
  uint64_t seed = 42;
  int sample_count = 10000;
  int m = 17;
  std::vector<int> m_list;
  int threads = 1;
  std::string output_dir = "out";
  BarrierParams barrier;     // zeros mean "search"
  bool barrier_given = false;
};

/// The documented config keys, one per line (used in error messages).
std::string documented_keys();

/// Applies one key/value pair; throws ConfigError on unknown keys or
/// malformed values.
void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value);

/// Parses a flat config file of `key = value` lines ('#' comments allowed).
RunConfig parse_config_file(const std::string& path);

/// Builds the right-hand side model from its `kind:params` description.
PsiModel make_psi(const std::string& spec, int power);

std::vector<double> parse_double_list(const std::string& csv);
std::vector<int> parse_int_list(const std::string& csv);

}  // namespace hq
