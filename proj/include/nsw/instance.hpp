#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsw/rational.hpp"

namespace nsw {

using AgentId = std::size_t;
using ItemId = std::size_t;
using ItemSet = std::vector<ItemId>;  // sorted, no duplicates

struct Agent {
  Rational weight;
  std::vector<Rational> values;
};

// Weighted NSW instance with additive valuations. Values are stored possibly
// rescaled per agent; `scale[i]` maps them back: original = stored * scale[i].
struct Instance {
  std::size_t num_items = 0;
  std::vector<Agent> agents;
  std::vector<Rational> scale;

  std::size_t num_agents() const { return agents.size(); }
  const Rational& value(AgentId i, ItemId j) const { return agents[i].values[j]; }
  Rational original_value(AgentId i, ItemId j) const;
  Rational scale_of(AgentId i) const;
};

// Builds an instance with unit scale factors. Does not validate.
Instance make_instance(std::vector<Rational> weights, std::vector<std::vector<Rational>> values);

struct Allocation {
  std::vector<std::optional<AgentId>> owner;

  static Allocation unassigned(std::size_t num_items) {
    return Allocation{std::vector<std::optional<AgentId>>(num_items)};
  }
};

// Natural log of the weighted NSW; -infinity when a positively weighted agent
// receives nothing of value.
using LogWelfare = double;

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class WeightSumError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};
class NegativeValue : public InstanceError {
 public:
  using InstanceError::InstanceError;
};
class EmptyInstance : public InstanceError {
 public:
  using InstanceError::InstanceError;
};
class OverlappingBundles : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void validate(const Instance& instance);

// Checks that every owner is a valid agent index.
void validate_allocation(const Instance& instance, const Allocation& alloc);

// Bundle value in stored (possibly scaled) units.
Rational bundle_value(const Instance& instance, AgentId agent, std::span<const ItemId> items);

std::vector<ItemSet> bundles(const Allocation& alloc, std::size_t num_agents);

// Log welfare in original value units. Zero-weight agents contribute 0.
LogWelfare log_nsw(const Instance& instance, const Allocation& alloc);
double nsw(const Instance& instance, const Allocation& alloc);

// Divides each agent's values by its smallest positive value so that every
// value is 0 or >= 1; the divisor is folded into `scale`.
Instance scale_values(const Instance& instance);

// True iff no bundle envies another after removing the other bundle's most
// valuable item, all under the single valuation `values`.
bool check_ef1(std::span<const Rational> values, std::span<const ItemSet> bundles);

}  // namespace nsw
