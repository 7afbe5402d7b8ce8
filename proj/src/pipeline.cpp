#include "nsw/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "nsw/reference.hpp"

namespace nsw {
namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

SolveResult solve_instance(const Instance& instance, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(instance);
  SolveResult result;
  result.epsilon = options.epsilon;

  if (!positivity_check(instance)) {
    result.positive = false;
    result.allocation = Allocation::unassigned(instance.num_items);
    if (options.gift_leftovers) result.allocation = gift_leftovers(instance, result.allocation);
    result.log_welfare = -std::numeric_limits<double>::infinity();
    result.lp_value = -std::numeric_limits<double>::infinity();
  } else {
    result.lp = solve_configuration_lp(instance, options.epsilon / 4, ConfigLpOptions{options.search});
    result.lp_value = result.lp.lp_value;
    result.rounding = round_best(instance, result.lp);
    if (options.mode == RoundingMode::kSample) {
      std::mt19937_64 rng(options.seed);
      const std::size_t k = sample_matching(result.rounding.combination, rng);
      result.allocation =
          allocation_from_matching(result.rounding.combination.matchings[k], result.rounding.groups, instance.num_items);
    } else {
      result.allocation = result.rounding.allocation;
    }
    if (options.gift_leftovers) result.allocation = gift_leftovers(instance, result.allocation);
    result.log_welfare = log_nsw(instance, result.allocation);
  }
  result.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return result;
}

nlohmann::json report_json(const SolveResult& result, bool include_timing) {
  const double welfare = std::exp(result.log_welfare);
  nlohmann::json j;
  j["nsw"] = welfare;
  j["log_nsw"] = finite_or_null(result.log_welfare);
  j["lp_value"] = finite_or_null(result.lp_value);
  j["epsilon"] = result.epsilon;
  j["matchings"] = result.rounding.combination.matchings.size();
  j["runtime_ms"] = include_timing ? result.runtime_ms : 0;
  j["lp_ratio"] = welfare > 0 ? finite_or_null(std::exp(result.lp_value) / welfare) : nlohmann::json(nullptr);
  return j;
}

}  // namespace nsw
