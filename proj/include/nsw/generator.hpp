#pragma once

#include <cstdint>
#include <string>

#include "nsw/instance.hpp"

namespace nsw {

enum class ValueDistribution { kUniform, kZipf };
enum class WeightDistribution { kEqual, kSimplex, kDirichlet };

struct GeneratorOptions {
  std::size_t agents = 2;
  std::size_t items = 4;
  ValueDistribution values = ValueDistribution::kUniform;
  WeightDistribution weights = WeightDistribution::kSimplex;
  std::int64_t vmax = 10;
  double zipf_exponent = 1.1;
  double dirichlet_alpha = 1.0;
  std::uint64_t seed = 0;
  // Resample until some allocation has positive NSW.
  bool require_positive = false;
};

// Integer values; weights are exact rationals summing to 1 (Dirichlet draws
// quantized to multiples of 1/1000 before normalizing).
Instance generate_instance(const GeneratorOptions& options);

ValueDistribution parse_value_distribution(const std::string& name);
WeightDistribution parse_weight_distribution(const std::string& name);

}  // namespace nsw
