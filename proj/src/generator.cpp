#include "nsw/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nsw/reference.hpp"

namespace nsw {
namespace {

std::vector<Rational> draw_weights(const GeneratorOptions& o, std::mt19937_64& rng) {
  std::vector<Rational> w(o.agents);
  if (o.weights == WeightDistribution::kEqual) {
    for (auto& x : w) x = Rational(1, static_cast<unsigned long>(o.agents));
    return w;
  }
  const double alpha = o.weights == WeightDistribution::kSimplex ? 1.0 : o.dirichlet_alpha;
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> g(o.agents);
  double total = 0.0;
  for (double& x : g) {
    x = gamma(rng);
    total += x;
  }
  std::vector<long> ticks(o.agents);
  long tick_total = 0;
  for (std::size_t i = 0; i < o.agents; ++i) {
    ticks[i] = std::max(1L, std::lround(1000.0 * g[i] / total));
    tick_total += ticks[i];
  }
  for (std::size_t i = 0; i < o.agents; ++i) {
    w[i] = Rational(ticks[i], tick_total);
    w[i].canonicalize();
  }
  return w;
}

std::vector<std::vector<Rational>> draw_values(const GeneratorOptions& o, std::mt19937_64& rng) {
  std::vector<std::vector<Rational>> values(o.agents, std::vector<Rational>(o.items));
  if (o.values == ValueDistribution::kUniform) {
    std::uniform_int_distribution<std::int64_t> pick(0, o.vmax);
    for (auto& row : values) {
      for (auto& v : row) v = Rational(static_cast<long>(pick(rng)));
    }
    return values;
  }
  // Zipf: each agent ranks the items at random; rank r gets round(vmax / r^s).
  for (auto& row : values) {
    std::vector<std::size_t> perm(o.items);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t r = 0; r < o.items; ++r) {
      const double v = static_cast<double>(o.vmax) / std::pow(static_cast<double>(r + 1), o.zipf_exponent);
      row[perm[r]] = Rational(std::lround(v));
    }
  }
  return values;
}

}  // namespace

Instance generate_instance(const GeneratorOptions& options) {
  if (options.agents == 0 || options.items == 0) throw std::invalid_argument("need at least one agent and item");
  if (options.vmax < 0) throw std::invalid_argument("vmax must be nonnegative");
  std::mt19937_64 rng(options.seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto weights = draw_weights(options, rng);
    auto values = draw_values(options, rng);
    Instance inst = make_instance(std::move(weights), std::move(values));
    inst.num_items = options.items;
    if (!options.require_positive || positivity_check(inst)) return inst;
  }
  throw std::runtime_error("could not generate an instance with positive welfare");
}

ValueDistribution parse_value_distribution(const std::string& name) {
  if (name == "uniform") return ValueDistribution::kUniform;
  if (name == "zipf") return ValueDistribution::kZipf;
  throw std::invalid_argument("unknown value distribution '" + name + "'");
}

WeightDistribution parse_weight_distribution(const std::string& name) {
  if (name == "equal") return WeightDistribution::kEqual;
  if (name == "simplex") return WeightDistribution::kSimplex;
  if (name == "dirichlet") return WeightDistribution::kDirichlet;
  throw std::invalid_argument("unknown weight distribution '" + name + "'");
}

}  // namespace nsw
