#include "nsw/instance.hpp"

#include <cmath>
#include <limits>

namespace nsw {

Rational Instance::original_value(AgentId i, ItemId j) const {
  return agents[i].values[j] * scale_of(i);
}

Rational Instance::scale_of(AgentId i) const {
  return i < scale.size() ? scale[i] : Rational(1);
}

Instance make_instance(std::vector<Rational> weights, std::vector<std::vector<Rational>> values) {
  Instance inst;
  inst.num_items = values.empty() ? 0 : values.front().size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    inst.agents.push_back(Agent{weights[i], i < values.size() ? values[i] : std::vector<Rational>{}});
  }
  inst.scale.assign(weights.size(), Rational(1));
  return inst;
}

void validate(const Instance& instance) {
  if (instance.num_items == 0 || instance.agents.empty()) {
    throw EmptyInstance("instance needs at least one agent and one item");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < instance.agents.size(); ++i) {
    const Agent& a = instance.agents[i];
    if (a.values.size() != instance.num_items) {
      throw InstanceError("agent " + std::to_string(i) + " has " + std::to_string(a.values.size()) +
                          " values, expected " + std::to_string(instance.num_items));
    }
    if (sgn(a.weight) < 0) {
      throw WeightSumError("agent " + std::to_string(i) + " has negative weight");
    }
    for (std::size_t j = 0; j < a.values.size(); ++j) {
      if (sgn(a.values[j]) < 0) {
        throw NegativeValue("agent " + std::to_string(i) + " item " + std::to_string(j) +
                            " has negative value " + format_rational(a.values[j]));
      }
    }
    total += a.weight;
  }
  if (total != 1) {
    throw WeightSumError("weights sum to " + format_rational(total) + ", expected 1");
  }
  if (!instance.scale.empty()) {
    if (instance.scale.size() != instance.agents.size()) {
      throw InstanceError("scale vector length mismatch");
    }
    for (const Rational& s : instance.scale) {
      if (sgn(s) <= 0) throw InstanceError("scale factors must be positive");
    }
  }
}

void validate_allocation(const Instance& instance, const Allocation& alloc) {
  if (alloc.owner.size() != instance.num_items) {
    throw std::invalid_argument("allocation covers " + std::to_string(alloc.owner.size()) +
                                " items, expected " + std::to_string(instance.num_items));
  }
  for (const auto& o : alloc.owner) {
    if (o && *o >= instance.num_agents()) {
      throw std::invalid_argument("allocation references agent " + std::to_string(*o));
    }
  }
}

Rational bundle_value(const Instance& instance, AgentId agent, std::span<const ItemId> items) {
  Rational sum = 0;
  for (ItemId j : items) sum += instance.agents[agent].values[j];
  return sum;
}

std::vector<ItemSet> bundles(const Allocation& alloc, std::size_t num_agents) {
  std::vector<ItemSet> out(num_agents);
  for (ItemId j = 0; j < alloc.owner.size(); ++j) {
    if (alloc.owner[j]) out[*alloc.owner[j]].push_back(j);
  }
  return out;
}

LogWelfare log_nsw(const Instance& instance, const Allocation& alloc) {
  validate_allocation(instance, alloc);
  const auto bs = bundles(alloc, instance.num_agents());
  double total = 0.0;
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    const Rational& w = instance.agents[i].weight;
    if (sgn(w) == 0) continue;
    Rational v = bundle_value(instance, i, bs[i]);
    if (sgn(v) == 0) return -std::numeric_limits<double>::infinity();
    total += w.get_d() * log_rational(v * instance.scale_of(i));
  }
  return total;
}

double nsw(const Instance& instance, const Allocation& alloc) {
  return std::exp(log_nsw(instance, alloc));
}

Instance scale_values(const Instance& instance) {
  Instance out = instance;
  out.scale.resize(out.agents.size(), Rational(1));
  for (AgentId i = 0; i < out.agents.size(); ++i) {
    auto& values = out.agents[i].values;
    std::optional<Rational> min_positive;
    for (const Rational& v : values) {
      if (sgn(v) > 0 && (!min_positive || v < *min_positive)) min_positive = v;
    }
    if (!min_positive) continue;
    for (Rational& v : values) v /= *min_positive;
    out.scale[i] *= *min_positive;
  }
  return out;
}

bool check_ef1(std::span<const Rational> values, std::span<const ItemSet> bundles) {
  std::vector<char> seen(values.size(), 0);
  std::vector<Rational> total(bundles.size());
  std::vector<Rational> best(bundles.size());
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    for (ItemId j : bundles[b]) {
      if (j >= values.size()) throw std::out_of_range("bundle item out of range");
      if (seen[j]) throw OverlappingBundles("item " + std::to_string(j) + " appears in two bundles");
      seen[j] = 1;
      total[b] += values[j];
      if (values[j] > best[b]) best[b] = values[j];
    }
  }
  for (std::size_t a = 0; a < bundles.size(); ++a) {
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      if (a == b || bundles[b].empty()) continue;
      if (total[b] - best[b] > total[a]) return false;
    }
  }
  return true;
}

}  // namespace nsw
