#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nsw/config_lp.hpp"
#include "nsw/instance.hpp"

namespace nsw {

// x_ij = sum over columns S containing j of y_{i,S}; n x m, exact.
struct Marginals {
  std::vector<std::vector<Rational>> x;

  std::size_t num_agents() const { return x.size(); }
  std::size_t num_items() const { return x.empty() ? 0 : x.front().size(); }
};

// A unit-mass slice of one agent's fractional items.
struct Group {
  AgentId agent = 0;
  std::size_t index = 0;  // position within the agent's groups
  std::vector<std::pair<ItemId, Rational>> fractions;  // in the agent's item order

  Rational mass() const;
  Rational fraction(ItemId j) const;
};

struct GroupSet {
  std::vector<Group> groups;                 // agent-major, then by index
  std::vector<std::vector<ItemId>> order;    // per agent: non-increasing value, ties by index
};

// Edges (group index into GroupSet::groups, item), sorted by group.
using Matching = std::vector<std::pair<std::size_t, ItemId>>;

struct MatchingCombination {
  std::vector<Matching> matchings;
  std::vector<Rational> weights;  // positive, summing to 1
};

class EmptyAgent : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class DecompositionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Marginals marginals(const ColumnSolution& y, std::size_t num_agents, std::size_t num_items);

// Items sorted by non-increasing v_ij, ties by smaller index.
std::vector<ItemId> value_order(const Instance& instance, AgentId agent);

// Greedy unit groups for one agent. Throws EmptyAgent if agent has no mass.
std::vector<Group> build_groups(const Instance& instance, const Marginals& x, AgentId agent);

// Groups for every agent with positive mass.
GroupSet build_group_set(const Instance& instance, const Marginals& x);

// Exact convex decomposition of the group-item fractional matching into
// partial matchings, at most (#positive entries + 1) of them.
MatchingCombination decompose(const GroupSet& groups, std::size_t num_items);

Allocation allocation_from_matching(const Matching& matching, const GroupSet& groups, std::size_t num_items);

struct RoundingOutcome {
  Allocation allocation;
  LogWelfare log_welfare = 0.0;
  GroupSet groups;
  MatchingCombination combination;
  std::size_t chosen = 0;
  std::vector<LogWelfare> matching_welfare;  // per matching in the combination
};

// Best allocation over every matching of the decomposition.
RoundingOutcome round_best(const Instance& instance, const ColumnSolution& y);

// Draws matching k with probability weights[k].
std::size_t sample_matching(const MatchingCombination& combination, std::mt19937_64& rng);

// Gives each unassigned item to an agent valuing it most (ties: smaller index).
Allocation gift_leftovers(const Instance& instance, Allocation alloc);

}  // namespace nsw
