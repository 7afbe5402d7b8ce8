#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nsw/instance.hpp"

namespace nsw {

// Candidate dual solution: alpha over items, beta over agents.
struct DualPoint {
  std::vector<double> alpha;
  std::vector<double> beta;
};

// One configuration-LP variable y_{i,S}. `value` is v_i(S) in the units of
// the instance the column was generated from; always positive.
struct Column {
  AgentId agent = 0;
  ItemSet items;
  Rational value;

  bool operator==(const Column& other) const { return agent == other.agent && items == other.items; }
};

// Sparse configuration-LP solution. Masses are exact; lp_value is
// sum w_i y_{i,S} ln v_i(S) in original units. Agents with zero weight carry no
// columns (they take the empty bundle).
struct ColumnSolution {
  std::vector<Column> columns;
  std::vector<Rational> mass;
  double lp_value = 0.0;
};

enum class Termination { kVolume, kFeasibleCenter, kIterationCap };

struct EllipsoidRun {
  double guess = 0.0;
  std::vector<Column> columns;  // distinct, in discovery order
  std::size_t iterations = 0;
  Termination reason = Termination::kVolume;
  double final_log_volume = 0.0;
  std::vector<double> log_volume_trace;  // filled when requested
};

class NumericalCollapse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Knapsack cover

// Minimum-cost subset with sum(units) >= target, by DP over capped coverage.
// Returns indices into `units`/`costs`, or nullopt if the total is below the
// target.
std::optional<ItemSet> knapsack_cover(std::span<const std::int64_t> units, std::span<const double> costs,
                                      std::int64_t target);

// DP table answering knapsack_cover for every target up to `cap` at once.
// Only reachable coverage values (capped at `cap`) are stored, so the size is
// at most min(cap + 1, 2^k) per layer.
class KnapsackCoverTable {
 public:
  KnapsackCoverTable(std::span<const std::int64_t> units, std::span<const double> costs, std::int64_t cap);

  std::int64_t cap() const { return cap_; }
  // Coverage state (exact, or == cap meaning ">= cap") of the cheapest
  // solution covering at least `target`, or nullopt if unreachable.
  std::optional<std::int64_t> best_state(std::int64_t target) const;
  double cost(std::int64_t state) const;
  ItemSet reconstruct(std::int64_t state) const;
  // Reachable coverage states in increasing order.
  std::vector<std::int64_t> reachable() const;

 private:
  struct State {
    std::int64_t coverage;
    double cost;
    std::uint32_t prev;  // index into the previous layer
    bool taken;          // this layer's item is used
  };
  std::size_t index_of(std::int64_t coverage) const;

  std::int64_t cap_;
  std::vector<std::vector<State>> layers_;  // layers_[k]: first k items, sorted by coverage
  std::vector<std::size_t> suffix_arg_;     // argmin cost over last-layer states at index >= s
};

// ---------------------------------------------------------------------------
// Separation oracle

// Looks for (i, S') with sum_{j in S'} alpha_j + beta_i < w_i ln((1+eps/2) v_i(S')).
// Requires scaled values (each 0 or >= 1), alpha >= 0 and eps in (0, 1].
// Finds a pair whenever some (i, S) violates sum alpha + beta_i >= w_i ln v_i(S).
std::optional<Column> separation_oracle(const Instance& scaled, double epsilon, const DualPoint& dual);

// The oracle's acceptance test, evaluated in extended precision.
bool violates_relaxed(const Instance& scaled, double epsilon, const DualPoint& dual, const Column& column);

// ---------------------------------------------------------------------------
// Ellipsoid

// Central-cut ellipsoid over R^d started from the smallest ellipsoid containing
// the box [lower, upper]. The separator returns a normal g for the cut
// {x : g.(x - c) <= 0}, or nullopt if the center is accepted.
struct CentralCutResult {
  std::vector<double> center;
  std::size_t iterations = 0;
  Termination reason = Termination::kVolume;
  double final_log_volume = 0.0;
  std::vector<double> log_volume_trace;
};

using Separator = std::function<std::optional<std::vector<double>>(const std::vector<double>& center)>;

struct CentralCutOptions {
  double target_log_volume = 0.0;
  std::size_t max_iterations = 0;  // 0: analytic cap 2 d^2 ln(volume ratio)
  bool record_trace = false;
  bool extended_precision = false;
};

CentralCutResult central_cut_ellipsoid(std::span<const double> lower, std::span<const double> upper,
                                       const Separator& separator, const CentralCutOptions& options);

double unit_ball_log_volume(std::size_t dimension);

// Log-volume change of one central cut in dimension d >= 2.
double central_cut_log_volume_step(std::size_t dimension);

// Feasibility run for the dual with objective bound `guess` (scaled units).
// Retries once in extended precision before throwing NumericalCollapse.
EllipsoidRun ellipsoid_run(const Instance& scaled, double guess, double epsilon, bool record_trace = false);

// ---------------------------------------------------------------------------
// LP assembly

// Restricted configuration LP over the given columns (plus a best singleton for
// any agent left without one) with objective w_i ln((1+eps/2) v_i(S)).
// Throws Infeasible if the columns admit no solution.
ColumnSolution solve_restricted_primal(const Instance& scaled, std::span<const Column> columns, double epsilon);

enum class GuessSearch {
  kFullSweep,  // every grid point
  kBisection,  // boundary between volume and feasible-center outcomes
};

struct ConfigLpOptions {
  GuessSearch search = GuessSearch::kBisection;
};

// Conf-LP to additive error ln(1+eps). Column agents and lp_value refer to the
// input instance. Throws Infeasible if positivity fails.
ColumnSolution solve_configuration_lp(const Instance& instance, double epsilon, const ConfigLpOptions& options = {});

inline constexpr std::size_t kFullEnumerationMaxItems = 12;

// Exact Conf-LP over every positive-value column. Throws TooLarge past
// kFullEnumerationMaxItems.
ColumnSolution full_enumeration_lp(const Instance& instance);

// Checks per-agent mass == 1 and per-item mass <= 1 exactly.
bool is_feasible(const Instance& instance, const ColumnSolution& y);

}  // namespace nsw
