#include "nsw/config_lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nsw/lp_kernel.hpp"
#include "nsw/reference.hpp"

namespace nsw {
namespace {

// Solves the configuration LP restricted to `columns`. Objective coefficients
// are w_i (ln v_i(S) + log_offset) with v in the instance's stored units; the
// reported lp_value is in original units.
ColumnSolution solve_over_columns(const Instance& instance, std::vector<Column> columns, double log_offset) {
  const std::size_t m = instance.num_items;
  LinearProgram lp(columns.size());
  std::vector<double> log_scale(instance.num_agents());
  for (AgentId i = 0; i < instance.num_agents(); ++i) log_scale[i] = log_rational(instance.scale_of(i));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Column& col = columns[c];
    const double w = instance.agents[col.agent].weight.get_d();
    lp.objective[c] = w * (log_rational(col.value) + log_offset);
  }
  for (ItemId j = 0; j < m; ++j) {
    std::vector<Rational> row(columns.size());
    bool used = false;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (std::binary_search(columns[c].items.begin(), columns[c].items.end(), j)) {
        row[c] = 1;
        used = true;
      }
    }
    if (used) lp.add_row(std::move(row), Sense::kLessEqual, Rational(1));
  }
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    if (sgn(instance.agents[i].weight) <= 0) continue;
    std::vector<Rational> row(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].agent == i) row[c] = 1;
    }
    lp.add_row(std::move(row), Sense::kEqual, Rational(1));
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw Infeasible("restricted configuration LP has no feasible solution");
  }
  ColumnSolution out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (sgn(sol.values[c]) == 0) continue;
    const Column& col = columns[c];
    const double w = instance.agents[col.agent].weight.get_d();
    out.lp_value += w * sol.values[c].get_d() * (log_rational(col.value) + log_scale[col.agent]);
    out.columns.push_back(std::move(columns[c]));
    out.mass.push_back(sol.values[c]);
  }
  return out;
}

Column make_column(const Instance& instance, AgentId agent, ItemSet items) {
  Column col{agent, std::move(items), Rational(0)};
  col.value = bundle_value(instance, agent, col.items);
  return col;
}

}  // namespace

ColumnSolution solve_restricted_primal(const Instance& scaled, std::span<const Column> columns, double epsilon) {
  std::vector<Column> cols;
  std::set<std::pair<AgentId, ItemSet>> seen;
  std::vector<char> covered(scaled.num_agents(), 0);
  for (const Column& c : columns) {
    if (c.items.empty() || sgn(c.value) <= 0) throw std::invalid_argument("columns must have positive value");
    if (seen.emplace(c.agent, c.items).second) {
      cols.push_back(c);
      covered[c.agent] = 1;
    }
  }
  for (AgentId i = 0; i < scaled.num_agents(); ++i) {
    if (covered[i] || sgn(scaled.agents[i].weight) <= 0) continue;
    std::optional<ItemId> best;
    for (ItemId j = 0; j < scaled.num_items; ++j) {
      if (sgn(scaled.value(i, j)) > 0 && (!best || scaled.value(i, j) > scaled.value(i, *best))) best = j;
    }
    if (best) cols.push_back(make_column(scaled, i, {*best}));
  }
  return solve_over_columns(scaled, std::move(cols), std::log1p(epsilon / 2));
}

ColumnSolution solve_configuration_lp(const Instance& instance, double epsilon, const ConfigLpOptions& options) {
  validate(instance);
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!positivity_check(instance)) {
    throw Infeasible("no allocation with positive Nash social welfare exists");
  }

  // Zero-weight agents take the empty bundle and drop out of the LP.
  std::vector<AgentId> active;
  Instance reduced;
  reduced.num_items = instance.num_items;
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    if (sgn(instance.agents[i].weight) == 0) continue;
    active.push_back(i);
    reduced.agents.push_back(instance.agents[i]);
    reduced.scale.push_back(instance.scale_of(i));
  }
  const Instance scaled = scale_values(reduced);

  const ScoredAllocation baseline = assignment_baseline(scaled);
  std::vector<Column> baseline_columns;
  for (ItemId j = 0; j < scaled.num_items; ++j) {
    if (baseline.allocation.owner[j]) baseline_columns.push_back(make_column(scaled, *baseline.allocation.owner[j], {j}));
  }
  double log_shift = 0.0;  // original log welfare minus stored-units log welfare
  for (AgentId i = 0; i < scaled.num_agents(); ++i) {
    log_shift += scaled.agents[i].weight.get_d() * log_rational(scaled.scale_of(i));
  }

  const double step = epsilon / 4;
  const double span = std::log(static_cast<double>(scaled.num_items));
  const long last = static_cast<long>(std::ceil(span / step - 1e-12));

  std::map<long, ColumnSolution> solved;
  auto feasible_center_at = [&](long k) {
    const double guess = baseline.log_welfare + static_cast<double>(k) * step;
    EllipsoidRun run = ellipsoid_run(scaled, guess - log_shift, epsilon);
    std::vector<Column> cols = run.columns;
    cols.insert(cols.end(), baseline_columns.begin(), baseline_columns.end());
    solved.emplace(k, solve_restricted_primal(scaled, cols, epsilon));
    return run.reason == Termination::kFeasibleCenter;
  };

  if (options.search == GuessSearch::kFullSweep) {
    for (long k = 0; k <= last; ++k) feasible_center_at(k);
  } else {
    // A feasible center at guess o certifies lp <= o; a volume stop at o yields
    // a column set worth about o. The boundary pair pins lp within one step.
    long lo = -1;
    long hi = last + 1;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      if (feasible_center_at(mid)) hi = mid;
      else lo = mid;
    }
  }

  const ColumnSolution* best = nullptr;
  for (const auto& [k, sol] : solved) {
    if (!best || sol.lp_value > best->lp_value) best = &sol;
  }
  ColumnSolution out = best ? *best : solve_restricted_primal(scaled, baseline_columns, epsilon);
  for (Column& c : out.columns) {
    c.agent = active[c.agent];
    c.value = bundle_value(instance, c.agent, c.items);
  }
  return out;
}

ColumnSolution full_enumeration_lp(const Instance& instance) {
  validate(instance);
  const std::size_t m = instance.num_items;
  if (m > kFullEnumerationMaxItems) {
    throw TooLarge("full enumeration supports at most " + std::to_string(kFullEnumerationMaxItems) + " items");
  }
  std::vector<Column> cols;
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    if (sgn(instance.agents[i].weight) <= 0) continue;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      ItemSet items;
      for (ItemId j = 0; j < m; ++j) {
        if (mask & (1u << j)) items.push_back(j);
      }
      Column col = make_column(instance, i, std::move(items));
      if (sgn(col.value) > 0) cols.push_back(std::move(col));
    }
  }
  // Stored-unit objective; per-agent scale offsets are constant on every
  // feasible y since each agent's mass is 1.
  return solve_over_columns(instance, std::move(cols), 0.0);
}

bool is_feasible(const Instance& instance, const ColumnSolution& y) {
  if (y.columns.size() != y.mass.size()) return false;
  std::vector<Rational> agent_mass(instance.num_agents());
  std::vector<Rational> item_mass(instance.num_items);
  for (std::size_t c = 0; c < y.columns.size(); ++c) {
    if (sgn(y.mass[c]) < 0) return false;
    const Column& col = y.columns[c];
    if (col.agent >= instance.num_agents()) return false;
    agent_mass[col.agent] += y.mass[c];
    for (ItemId j : col.items) {
      if (j >= instance.num_items) return false;
      item_mass[j] += y.mass[c];
    }
  }
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    const bool positive = sgn(instance.agents[i].weight) > 0;
    if (positive && agent_mass[i] != 1) return false;
    if (!positive && sgn(agent_mass[i]) != 0 && agent_mass[i] != 1) return false;
  }
  for (const Rational& x : item_mass) {
    if (x > 1) return false;
  }
  return true;
}

}  // namespace nsw
