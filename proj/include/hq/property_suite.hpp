#pragma once

#include "hq/symcalc.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hq {

struct SuiteConfig {
  int n = 3;
  int k = 2;
  int l = 1;
  uint64_t seed = 42;
  int samples = 10000;  // per sampling stream
  int threads = 1;
  bool corrupt_sigma = false;  // self-test hook: injects an off-by-one order
};

struct CheckResult {
  std::string name;
  int count = 0;
  double worst_slack = 0.0;
  long worst_index = -1;
  std::string worst_sample;
  bool calibrated = false;
  double calibrated_constant = 0.0;  // sampled infimum when calibrated
  bool pass = false;
};

struct SuiteReport {
  SuiteConfig cfg;
  std::vector<CheckResult> checks;
  bool pass = false;
  double worst_slack = 0.0;
  double wall_time_sec = 0.0;
};

/// Runs the algebraic-inequality corpus at one (n, k, l): the summation
/// identities, the Maclaurin-type bounds, the Gamma_k cone facts,
/// the generalized Newton-MacLaurin inequality, the Gamma~_k cone facts,
/// and the gradient projection inequality. Every slack must stay above
/// -1e-9; calibrated constants must stay strictly positive. Deterministic
/// for a given seed and independent of the thread count (64 fixed shards).
SuiteReport run_property_suite(const SuiteConfig& cfg);

inline constexpr double kSuiteSlackFloor = -1e-9;

}  // namespace hq
