#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nsw/config_lp.hpp"

namespace nsw::detail {

// Separation oracle with the dual-independent rounding precomputed, so one
// instance can serve a whole ellipsoid run.
class SeparationOracle {
 public:
  SeparationOracle(const Instance& scaled, double epsilon);

  std::optional<Column> operator()(const DualPoint& dual) const;

 private:
  // Guess of the most valuable item `top` of the violated set.
  struct Guess {
    ItemId top = 0;
    std::vector<ItemId> items;         // positive items no more valuable than top
    std::vector<std::int64_t> units;   // rounded values in units of eps*v_top/(2m)
    std::int64_t min_target = 0;       // units of top itself
    long double log_reachable = 0;     // ln of the pool's total value
  };
  struct AgentPlan {
    AgentId agent = 0;
    long double weight = 0;
    std::vector<double> value;
    std::vector<Guess> guesses;
  };

  const Instance& instance_;
  long double log_slack_ = 0;
  std::vector<AgentPlan> plans_;
};

}  // namespace nsw::detail
