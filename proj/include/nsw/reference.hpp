#pragma once

#include <cstdint>
#include <stdexcept>

#include "nsw/instance.hpp"

namespace nsw {

class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoredAllocation {
  Allocation allocation;
  LogWelfare log_welfare;
};

inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

// Exhaustive search over all n^m total assignments. Throws TooLarge past
// kBruteForceLimit.
ScoredAllocation brute_force_opt(const Instance& instance);

// Whether every positive-weight agent can be matched to a distinct item it
// values positively.
bool positivity_check(const Instance& instance);

// Best one-item-per-agent assignment over positive-weight agents, maximizing
// sum_i w_i ln v_ij. Within ln m of the integral and fractional optimum.
// Throws Infeasible when positivity_check fails.
ScoredAllocation assignment_baseline(const Instance& instance);

}  // namespace nsw
