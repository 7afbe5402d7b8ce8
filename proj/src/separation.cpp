#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsw/config_lp.hpp"
#include "separation_detail.hpp"

namespace nsw {
namespace detail {

SeparationOracle::SeparationOracle(const Instance& scaled, double epsilon)
    : instance_(scaled) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  const std::size_t m = scaled.num_items;
  log_slack_ = std::log1p(static_cast<long double>(epsilon) / 2);
  const Rational eps_q = rational_from_double(epsilon);
  const Rational units_per_top = Rational(2 * static_cast<long>(m)) / eps_q;

  for (AgentId i = 0; i < scaled.num_agents(); ++i) {
    const Agent& agent = scaled.agents[i];
    if (sgn(agent.weight) <= 0) continue;
    AgentPlan plan;
    plan.agent = i;
    plan.weight = static_cast<long double>(agent.weight.get_d());
    plan.value.resize(m);
    for (ItemId j = 0; j < m; ++j) plan.value[j] = agent.values[j].get_d();

    for (ItemId top = 0; top < m; ++top) {
      const Rational& vtop = agent.values[top];
      if (sgn(vtop) <= 0) continue;
      Guess g;
      g.top = top;
      long double reachable = 0;
      for (ItemId j = 0; j < m; ++j) {
        const Rational& v = agent.values[j];
        if (sgn(v) <= 0 || v > vtop) continue;
        // Round v down to a multiple of eps * vtop / (2m), in whole units.
        Rational ratio = units_per_top * v / vtop;
        mpz_class z;
        mpz_fdiv_q(z.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
        g.items.push_back(j);
        g.units.push_back(z.get_si());
        reachable += plan.value[j];
        if (j == top) g.min_target = z.get_si();
      }
      g.log_reachable = std::log(reachable);
      plan.guesses.push_back(std::move(g));
    }
    plans_.push_back(std::move(plan));
  }
}

std::optional<Column> SeparationOracle::operator()(const DualPoint& dual) const {
  const std::size_t m = instance_.num_items;
  if (dual.alpha.size() != m || dual.beta.size() != instance_.num_agents()) {
    throw std::invalid_argument("dual point dimension mismatch");
  }
  for (const AgentPlan& plan : plans_) {
    const long double beta = dual.beta[plan.agent];
    for (const Guess& g : plan.guesses) {
      // Every candidate S' lies in this guess's item pool and costs >= 0.
      const long double ceiling = plan.weight * (log_slack_ + g.log_reachable);
      if (beta >= ceiling) continue;

      std::vector<double> costs(g.items.size());
      for (std::size_t k = 0; k < g.items.size(); ++k) costs[k] = dual.alpha[g.items[k]];
      const std::int64_t total = std::accumulate(g.units.begin(), g.units.end(), std::int64_t{0});
      KnapsackCoverTable table(g.units, costs, total);

      // best_state is constant between consecutive reachable coverages.
      const std::int64_t first = std::max<std::int64_t>(g.min_target, 1);
      std::vector<std::int64_t> targets{first};
      for (std::int64_t c : table.reachable()) {
        if (c > first) targets.push_back(c);
      }
      std::int64_t last_state = -1;
      for (std::int64_t target : targets) {
        const auto state = table.best_state(target);
        if (!state) break;
        if (*state == last_state) continue;
        last_state = *state;
        // Cheapest cover cost only grows with the target.
        if (beta + static_cast<long double>(table.cost(*state)) >= ceiling) break;
        ItemSet local = table.reconstruct(*state);
        ItemSet items;
        items.reserve(local.size());
        long double lhs = beta;
        long double value = 0;
        for (std::size_t k : local) {
          const ItemId j = g.items[k];
          items.push_back(j);
          lhs += dual.alpha[j];
          value += plan.value[j];
        }
        if (items.empty() || value <= 0) continue;
        const long double rhs = plan.weight * (log_slack_ + std::log(value));
        if (lhs < rhs) {
          Column col{plan.agent, std::move(items), Rational(0)};
          col.value = bundle_value(instance_, col.agent, col.items);
          return col;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

std::optional<Column> separation_oracle(const Instance& scaled, double epsilon, const DualPoint& dual) {
  return detail::SeparationOracle(scaled, epsilon)(dual);
}

bool violates_relaxed(const Instance& scaled, double epsilon, const DualPoint& dual, const Column& column) {
  if (column.items.empty()) return false;
  long double lhs = dual.beta[column.agent];
  for (ItemId j : column.items) lhs += dual.alpha[j];
  const Rational v = bundle_value(scaled, column.agent, column.items);
  if (sgn(v) <= 0) return false;
  const long double w = scaled.agents[column.agent].weight.get_d();
  const long double rhs = w * (std::log1p(static_cast<long double>(epsilon) / 2) + log_rational_ld(v));
  return lhs < rhs;
}

}  // namespace nsw
