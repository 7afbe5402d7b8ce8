#include "nsw/reference.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace nsw {
namespace {

std::vector<AgentId> positive_agents(const Instance& instance) {
  std::vector<AgentId> out;
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    if (sgn(instance.agents[i].weight) > 0) out.push_back(i);
  }
  return out;
}

// Kuhn's augmenting paths: left vertices are agents, right vertices items.
class BipartiteMatcher {
 public:
  BipartiteMatcher(const Instance& instance, std::vector<AgentId> agents)
      : instance_(instance), agents_(std::move(agents)), item_owner_(instance.num_items, -1) {}

  std::size_t run() {
    std::size_t matched = 0;
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      visited_.assign(instance_.num_items, 0);
      if (augment(a)) ++matched;
    }
    return matched;
  }

 private:
  bool augment(std::size_t a) {
    const AgentId i = agents_[a];
    for (ItemId j = 0; j < instance_.num_items; ++j) {
      if (sgn(instance_.value(i, j)) <= 0 || visited_[j]) continue;
      visited_[j] = 1;
      if (item_owner_[j] < 0 || augment(static_cast<std::size_t>(item_owner_[j]))) {
        item_owner_[j] = static_cast<int>(a);
        return true;
      }
    }
    return false;
  }

  const Instance& instance_;
  std::vector<AgentId> agents_;
  std::vector<int> item_owner_;
  std::vector<char> visited_;
};

// Rectangular Hungarian algorithm (rows <= cols), minimizing total cost.
// Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n == 0 ? 0 : cost[0].size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

ScoredAllocation brute_force_opt(const Instance& instance) {
  const std::size_t n = instance.num_agents();
  const std::size_t m = instance.num_items;
  double count = std::pow(static_cast<double>(n), static_cast<double>(m));
  if (count > static_cast<double>(kBruteForceLimit)) {
    throw TooLarge("brute force needs " + std::to_string(n) + "^" + std::to_string(m) + " assignments");
  }

  std::vector<std::vector<double>> value(n, std::vector<double>(m));
  std::vector<double> weight(n);
  std::vector<double> log_scale(n);
  for (AgentId i = 0; i < n; ++i) {
    weight[i] = instance.agents[i].weight.get_d();
    log_scale[i] = log_rational(instance.scale_of(i));
    for (ItemId j = 0; j < m; ++j) value[i][j] = instance.value(i, j).get_d();
  }

  std::vector<std::size_t> owner(m, 0);
  std::vector<double> sums(n, 0.0);
  for (ItemId j = 0; j < m; ++j) sums[0] += value[0][j];
  std::vector<std::size_t> best_owner = owner;
  double best = -std::numeric_limits<double>::infinity();
  bool have_best = false;

  auto score = [&]() {
    double total = 0.0;
    for (AgentId i = 0; i < n; ++i) {
      if (weight[i] == 0.0) continue;
      if (sums[i] <= 0.0) return -std::numeric_limits<double>::infinity();
      total += weight[i] * (std::log(sums[i]) + log_scale[i]);
    }
    return total;
  };

  // Odometer over assignments; sums are updated incrementally.
  while (true) {
    const double s = score();
    if (!have_best || s > best) {
      best = s;
      best_owner = owner;
      have_best = true;
    }
    std::size_t j = 0;
    for (; j < m; ++j) {
      sums[owner[j]] -= value[owner[j]][j];
      owner[j] = (owner[j] + 1) % n;
      sums[owner[j]] += value[owner[j]][j];
      if (owner[j] != 0) break;
    }
    if (j == m) break;
  }

  Allocation alloc = Allocation::unassigned(m);
  for (ItemId j = 0; j < m; ++j) alloc.owner[j] = best_owner[j];
  return {alloc, log_nsw(instance, alloc)};
}

bool positivity_check(const Instance& instance) {
  auto agents = positive_agents(instance);
  const std::size_t needed = agents.size();
  if (needed > instance.num_items) return false;
  BipartiteMatcher matcher(instance, std::move(agents));
  return matcher.run() == needed;
}

ScoredAllocation assignment_baseline(const Instance& instance) {
  if (!positivity_check(instance)) {
    throw Infeasible("no allocation with positive Nash social welfare exists");
  }
  const auto agents = positive_agents(instance);
  constexpr double kForbidden = 1e12;
  std::vector<std::vector<double>> cost(agents.size(), std::vector<double>(instance.num_items, kForbidden));
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const AgentId i = agents[a];
    const double w = instance.agents[i].weight.get_d();
    for (ItemId j = 0; j < instance.num_items; ++j) {
      if (sgn(instance.value(i, j)) > 0) cost[a][j] = -w * log_rational(instance.original_value(i, j));
    }
  }
  const auto cols = hungarian(cost);
  Allocation alloc = Allocation::unassigned(instance.num_items);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (sgn(instance.value(agents[a], cols[a])) <= 0) {
      throw std::logic_error("assignment baseline picked a zero-value edge");
    }
    alloc.owner[cols[a]] = agents[a];
  }
  return {alloc, log_nsw(instance, alloc)};
}

}  // namespace nsw
