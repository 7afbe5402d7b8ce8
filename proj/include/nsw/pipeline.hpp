#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "nsw/config_lp.hpp"
#include "nsw/instance.hpp"
#include "nsw/rounding.hpp"

namespace nsw {

enum class RoundingMode { kDeterministic, kSample };

struct SolveOptions {
  double epsilon = 0.1;
  bool gift_leftovers = false;
  RoundingMode mode = RoundingMode::kDeterministic;
  std::uint64_t seed = 0;
  GuessSearch search = GuessSearch::kBisection;
};

struct SolveResult {
  bool positive = true;  // false: no allocation has positive welfare
  Allocation allocation;
  LogWelfare log_welfare = 0.0;
  double epsilon = 0.0;
  double lp_value = 0.0;  // log domain
  ColumnSolution lp;
  RoundingOutcome rounding;
  std::int64_t runtime_ms = 0;
};

// positivity check, Conf-LP at epsilon/4, rounding, optional leftover gifts.
SolveResult solve_instance(const Instance& instance, const SolveOptions& options);

// {"nsw", "log_nsw", "lp_value", "epsilon", "matchings", "runtime_ms", "lp_ratio"};
// non-finite numbers are written as null.
nlohmann::json report_json(const SolveResult& result, bool include_timing = true);

}  // namespace nsw
