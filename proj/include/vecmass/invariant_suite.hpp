#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vecmass/tetrad.hpp"

namespace vecmass {

struct InvariantRow {
  std::string module;
  std::string property;
  int cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Metric used by the boost-preservation rows. Anything other than kMinkowski
  /// is a fault injection and must make those rows fail.
  MetricSignature metric = kMinkowski;
  int workers = 1;
};

/// Runs the randomized invariant checks of every module.
std::vector<InvariantRow> run_invariant_suite(const SuiteOptions& options);

bool all_pass(const std::vector<InvariantRow>& rows);

std::string suite_table(const std::vector<InvariantRow>& rows);
std::string suite_csv(const std::vector<InvariantRow>& rows);
std::string suite_json(const std::vector<InvariantRow>& rows);

}  // namespace vecmass
