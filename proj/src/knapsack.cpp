#include <algorithm>
#include <numeric>

#include "nsw/config_lp.hpp"

namespace nsw {

KnapsackCoverTable::KnapsackCoverTable(std::span<const std::int64_t> units, std::span<const double> costs,
                                       std::int64_t cap)
    : cap_(std::max<std::int64_t>(cap, 0)) {
  if (units.size() != costs.size()) throw std::invalid_argument("units and costs differ in length");
  layers_.reserve(units.size() + 1);
  layers_.push_back({State{0, 0.0, 0, false}});
  for (std::size_t k = 0; k < units.size(); ++k) {
    if (units[k] < 0) throw std::invalid_argument("negative unit value");
    const std::vector<State>& prev = layers_.back();
    std::vector<State> next;
    next.reserve(2 * prev.size());
    // Both streams are sorted by coverage; merge them keeping the cheaper state
    // per coverage, preferring "not taken" and then the smaller predecessor.
    std::size_t a = 0, b = 0;
    auto push = [&](State s) {
      if (!next.empty() && next.back().coverage == s.coverage) {
        if (s.cost < next.back().cost) next.back() = s;
      } else {
        next.push_back(s);
      }
    };
    while (a < prev.size() || b < prev.size()) {
      const std::int64_t skip_cov = a < prev.size() ? prev[a].coverage : cap_ + 1;
      const std::int64_t take_cov = b < prev.size() ? std::min(prev[b].coverage + units[k], cap_) : cap_ + 1;
      if (skip_cov <= take_cov) {
        push(State{skip_cov, prev[a].cost, static_cast<std::uint32_t>(a), false});
        ++a;
      } else {
        push(State{take_cov, prev[b].cost + costs[k], static_cast<std::uint32_t>(b), true});
        ++b;
      }
    }
    layers_.push_back(std::move(next));
  }
  const std::vector<State>& last = layers_.back();
  suffix_arg_.assign(last.size(), 0);
  for (std::size_t s = last.size(); s-- > 0;) {
    const bool better = s + 1 == last.size() || last[s].cost <= last[suffix_arg_[s + 1]].cost;
    suffix_arg_[s] = better ? s : suffix_arg_[s + 1];
  }
}

std::size_t KnapsackCoverTable::index_of(std::int64_t coverage) const {
  const std::vector<State>& last = layers_.back();
  return static_cast<std::size_t>(
      std::lower_bound(last.begin(), last.end(), coverage,
                       [](const State& s, std::int64_t c) { return s.coverage < c; }) -
      last.begin());
}

std::optional<std::int64_t> KnapsackCoverTable::best_state(std::int64_t target) const {
  target = std::max<std::int64_t>(target, 0);
  if (target > cap_) return std::nullopt;
  const std::size_t idx = index_of(target);
  if (idx == layers_.back().size()) return std::nullopt;
  return layers_.back()[suffix_arg_[idx]].coverage;
}

double KnapsackCoverTable::cost(std::int64_t state) const {
  const std::size_t idx = index_of(state);
  if (idx == layers_.back().size() || layers_.back()[idx].coverage != state) {
    throw std::invalid_argument("unreachable knapsack state");
  }
  return layers_.back()[idx].cost;
}

std::vector<std::int64_t> KnapsackCoverTable::reachable() const {
  std::vector<std::int64_t> out;
  out.reserve(layers_.back().size());
  for (const State& s : layers_.back()) out.push_back(s.coverage);
  return out;
}

ItemSet KnapsackCoverTable::reconstruct(std::int64_t state) const {
  ItemSet items;
  std::size_t idx = index_of(state);
  if (idx == layers_.back().size() || layers_.back()[idx].coverage != state) {
    throw std::invalid_argument("unreachable knapsack state");
  }
  for (std::size_t k = layers_.size() - 1; k > 0; --k) {
    const State& s = layers_[k][idx];
    if (s.taken) items.push_back(k - 1);
    idx = s.prev;
  }
  std::reverse(items.begin(), items.end());
  return items;
}

std::optional<ItemSet> knapsack_cover(std::span<const std::int64_t> units, std::span<const double> costs,
                                      std::int64_t target) {
  if (target <= 0) return ItemSet{};
  const std::int64_t total = std::accumulate(units.begin(), units.end(), std::int64_t{0});
  if (total < target) return std::nullopt;
  KnapsackCoverTable table(units, costs, target);
  const auto state = table.best_state(target);
  if (!state) return std::nullopt;
  return table.reconstruct(*state);
}

}  // namespace nsw
