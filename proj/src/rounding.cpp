#include "nsw/rounding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

namespace nsw {

Rational Group::mass() const {
  Rational total = 0;
  for (const auto& [j, f] : fractions) total += f;
  return total;
}

Rational Group::fraction(ItemId j) const {
  for (const auto& [item, f] : fractions) {
    if (item == j) return f;
  }
  return Rational(0);
}

Marginals marginals(const ColumnSolution& y, std::size_t num_agents, std::size_t num_items) {
  Marginals out{std::vector<std::vector<Rational>>(num_agents, std::vector<Rational>(num_items))};
  for (std::size_t c = 0; c < y.columns.size(); ++c) {
    for (ItemId j : y.columns[c].items) out.x[y.columns[c].agent][j] += y.mass[c];
  }
  return out;
}

std::vector<ItemId> value_order(const Instance& instance, AgentId agent) {
  std::vector<ItemId> order(instance.num_items);
  std::iota(order.begin(), order.end(), ItemId{0});
  const auto& v = instance.agents[agent].values;
  std::stable_sort(order.begin(), order.end(), [&](ItemId a, ItemId b) { return v[a] > v[b]; });
  return order;
}

std::vector<Group> build_groups(const Instance& instance, const Marginals& x, AgentId agent) {
  std::vector<Group> groups;
  Group current{agent, 0, {}};
  Rational room = 1;
  for (ItemId j : value_order(instance, agent)) {
    Rational remaining = x.x[agent][j];
    while (sgn(remaining) > 0) {
      const Rational take = remaining < room ? remaining : room;
      current.fractions.emplace_back(j, take);
      remaining -= take;
      room -= take;
      if (sgn(room) == 0) {
        groups.push_back(std::move(current));
        current = Group{agent, groups.size(), {}};
        room = 1;
      }
    }
  }
  if (!current.fractions.empty()) groups.push_back(std::move(current));
  if (groups.empty()) throw EmptyAgent("agent " + std::to_string(agent) + " has no fractional items");
  return groups;
}

GroupSet build_group_set(const Instance& instance, const Marginals& x) {
  GroupSet set;
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    set.order.push_back(value_order(instance, i));
    bool any = false;
    for (const Rational& f : x.x[i]) any = any || sgn(f) > 0;
    if (!any) continue;
    for (Group& g : build_groups(instance, x, i)) set.groups.push_back(std::move(g));
  }
  return set;
}

namespace {

// Sparse square matrix with a perfect matching oracle over its support.
class PaddedMatrix {
 public:
  explicit PaddedMatrix(std::size_t size) : rows_(size) {}

  void add(std::size_t r, std::size_t c, const Rational& v) {
    if (sgn(v) > 0) rows_[r][c] += v;
  }
  bool empty() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const auto& row) { return row.empty(); });
  }

  // Row -> column perfect matching over positive entries, or nullopt.
  std::optional<std::vector<std::size_t>> perfect_matching() const {
    const std::size_t n = rows_.size();
    std::vector<long> col_owner(n, -1);
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<char> visited(n, 0);
      if (!augment(r, col_owner, visited)) return std::nullopt;
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t c = 0; c < n; ++c) row_to_col[static_cast<std::size_t>(col_owner[c])] = c;
    return row_to_col;
  }

  Rational min_on(const std::vector<std::size_t>& perm) const {
    Rational best = rows_[0].at(perm[0]);
    for (std::size_t r = 1; r < rows_.size(); ++r) best = std::min(best, rows_[r].at(perm[r]));
    return best;
  }

  void subtract(const std::vector<std::size_t>& perm, const Rational& theta) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      auto it = rows_[r].find(perm[r]);
      it->second -= theta;
      if (sgn(it->second) == 0) rows_[r].erase(it);
    }
  }

 private:
  bool augment(std::size_t r, std::vector<long>& col_owner, std::vector<char>& visited) const {
    for (const auto& [c, v] : rows_[r]) {
      if (visited[c]) continue;
      visited[c] = 1;
      if (col_owner[c] < 0 || augment(static_cast<std::size_t>(col_owner[c]), col_owner, visited)) {
        col_owner[c] = static_cast<long>(r);
        return true;
      }
    }
    return false;
  }

  std::vector<std::map<std::size_t, Rational>> rows_;
};

// A nonzero rational vector mu with A mu = 0, for A with more columns than rows.
std::vector<Rational> null_vector(std::vector<std::vector<Rational>> a, std::size_t cols) {
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    const Rational inv = 1 / a[row][c];
    for (Rational& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t k = 0; k < cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : pivot_col) is_pivot[c] = 1;
  std::size_t free = 0;
  while (free < cols && is_pivot[free]) ++free;
  if (free == cols) throw std::logic_error("null_vector: matrix has full column rank");
  std::vector<Rational> mu(cols);
  mu[free] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) mu[pivot_col[r]] = -a[r][free];
  return mu;
}

// Drops matchings until at most edges + 1 remain, preserving every edge
// marginal and the total weight.
void caratheodory_reduce(MatchingCombination& comb, const std::vector<std::pair<std::size_t, ItemId>>& edges) {
  std::map<std::pair<std::size_t, ItemId>, std::size_t> edge_index;
  for (std::size_t e = 0; e < edges.size(); ++e) edge_index[edges[e]] = e;
  while (comb.matchings.size() > edges.size() + 1) {
    const std::size_t k = comb.matchings.size();
    std::vector<std::vector<Rational>> a(edges.size() + 1, std::vector<Rational>(k));
    for (std::size_t c = 0; c < k; ++c) {
      for (const auto& edge : comb.matchings[c]) a[edge_index.at(edge)][c] = 1;
      a[edges.size()][c] = 1;
    }
    std::vector<Rational> mu = null_vector(std::move(a), k);
    // sum(mu) == 0 and mu != 0, so some entry is positive.
    std::optional<Rational> t;
    for (std::size_t c = 0; c < k; ++c) {
      if (sgn(mu[c]) > 0) {
        Rational ratio = comb.weights[c] / mu[c];
        if (!t || ratio < *t) t = ratio;
      }
    }
    MatchingCombination next;
    for (std::size_t c = 0; c < k; ++c) {
      Rational w = comb.weights[c] - *t * mu[c];
      if (sgn(w) > 0) {
        next.matchings.push_back(std::move(comb.matchings[c]));
        next.weights.push_back(std::move(w));
      }
    }
    comb = std::move(next);
  }
}

}  // namespace

MatchingCombination decompose(const GroupSet& groups, std::size_t num_items) {
  const std::size_t num_groups = groups.groups.size();
  const std::size_t m = num_items;
  const std::size_t size = num_groups + m;
  // Rows: real groups, then one dummy group per item. Columns: real items,
  // then one dummy item per group. The lower-right block is the transpose of
  // the real block, which makes the padded matrix doubly stochastic.
  PaddedMatrix matrix(size);
  std::vector<Rational> item_mass(m);
  std::vector<std::pair<std::size_t, ItemId>> edges;
  for (std::size_t g = 0; g < num_groups; ++g) {
    Rational mass = 0;
    for (const auto& [j, f] : groups.groups[g].fractions) {
      if (j >= m) throw std::out_of_range("group references unknown item");
      if (sgn(f) <= 0) continue;
      matrix.add(g, j, f);
      matrix.add(num_groups + j, m + g, f);
      item_mass[j] += f;
      mass += f;
      edges.emplace_back(g, j);
    }
    if (mass > 1) throw DecompositionFailure("group mass exceeds 1");
    matrix.add(g, m + g, 1 - mass);
  }
  for (ItemId j = 0; j < m; ++j) {
    if (item_mass[j] > 1) throw DecompositionFailure("item " + std::to_string(j) + " is over-assigned");
    matrix.add(num_groups + j, j, 1 - item_mass[j]);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::map<Matching, std::size_t> position;
  MatchingCombination comb;
  Rational extracted = 0;
  while (!matrix.empty()) {
    const auto perm = matrix.perfect_matching();
    if (!perm) throw DecompositionFailure("residual support has no perfect matching");
    const Rational theta = matrix.min_on(*perm);
    matrix.subtract(*perm, theta);
    extracted += theta;
    Matching real;
    for (std::size_t g = 0; g < num_groups; ++g) {
      if ((*perm)[g] < m) real.emplace_back(g, (*perm)[g]);
    }
    auto [it, inserted] = position.try_emplace(real, comb.matchings.size());
    if (inserted) {
      comb.matchings.push_back(std::move(real));
      comb.weights.push_back(theta);
    } else {
      comb.weights[it->second] += theta;
    }
  }
  if (extracted != 1) throw DecompositionFailure("extracted weights do not sum to 1");
  caratheodory_reduce(comb, edges);
  return comb;
}

Allocation allocation_from_matching(const Matching& matching, const GroupSet& groups, std::size_t num_items) {
  Allocation alloc = Allocation::unassigned(num_items);
  for (const auto& [g, j] : matching) {
    if (alloc.owner[j]) throw std::invalid_argument("matching uses item twice");
    alloc.owner[j] = groups.groups[g].agent;
  }
  return alloc;
}

RoundingOutcome round_best(const Instance& instance, const ColumnSolution& y) {
  RoundingOutcome out;
  const Marginals x = marginals(y, instance.num_agents(), instance.num_items);
  out.groups = build_group_set(instance, x);
  out.combination = decompose(out.groups, instance.num_items);
  for (std::size_t k = 0; k < out.combination.matchings.size(); ++k) {
    const Allocation alloc = allocation_from_matching(out.combination.matchings[k], out.groups, instance.num_items);
    const LogWelfare w = log_nsw(instance, alloc);
    out.matching_welfare.push_back(w);
    if (k == 0 || w > out.log_welfare) {
      out.log_welfare = w;
      out.allocation = alloc;
      out.chosen = k;
    }
  }
  return out;
}

std::size_t sample_matching(const MatchingCombination& combination, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < combination.weights.size(); ++k) {
    acc += combination.weights[k].get_d();
    if (u < acc) return k;
  }
  return combination.weights.size() - 1;
}

Allocation gift_leftovers(const Instance& instance, Allocation alloc) {
  for (ItemId j = 0; j < alloc.owner.size(); ++j) {
    if (alloc.owner[j]) continue;
    std::optional<AgentId> best;
    Rational best_value;
    for (AgentId i = 0; i < instance.num_agents(); ++i) {
      const Rational v = instance.original_value(i, j);
      if (!best || v > best_value) {
        best = i;
        best_value = v;
      }
    }
    alloc.owner[j] = best;
  }
  return alloc;
}

}  // namespace nsw
