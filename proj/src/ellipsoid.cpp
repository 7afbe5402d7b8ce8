#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "nsw/config_lp.hpp"
#include "separation_detail.hpp"

namespace nsw {
namespace {

template <typename Scalar>
CentralCutResult run_central_cut(std::span<const double> lower, std::span<const double> upper,
                                 const Separator& separator, const CentralCutOptions& options) {
  const std::size_t d = lower.size();
  if (d == 0 || upper.size() != d) throw std::invalid_argument("ellipsoid box dimension mismatch");
  const Scalar dd = static_cast<Scalar>(d);

  // Shape P = J J^T is kept through its factor J, so P stays positive semidefinite.
  std::vector<Scalar> center(d);
  std::vector<Scalar> factor(d * d, Scalar(0));  // row-major J
  double log_det = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const Scalar half = (static_cast<Scalar>(upper[k]) - static_cast<Scalar>(lower[k])) / 2;
    if (!(half > 0)) throw std::invalid_argument("ellipsoid box must have positive width");
    center[k] = (static_cast<Scalar>(upper[k]) + static_cast<Scalar>(lower[k])) / 2;
    factor[k * d + k] = std::sqrt(dd) * half;
    log_det += std::log(static_cast<double>(dd * half * half));
  }

  CentralCutResult result;
  double log_volume = unit_ball_log_volume(d) + 0.5 * log_det;
  const double step = central_cut_log_volume_step(d);
  std::size_t cap = options.max_iterations;
  if (cap == 0) {
    const double ratio = std::max(0.0, log_volume - options.target_log_volume);
    cap = static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(d * d) * ratio)) + 1;
  }

  auto as_double = [&]() {
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = static_cast<double>(center[k]);
    return c;
  };

  std::vector<Scalar> g(d), a(d), b(d);
  const Scalar stretch = d == 1 ? Scalar(1) / 2 : dd / std::sqrt(dd * dd - 1);
  const Scalar squeeze = d == 1 ? Scalar(0) : Scalar(1) - std::sqrt((dd - 1) / (dd + 1));
  result.reason = Termination::kIterationCap;
  while (true) {
    if (log_volume < options.target_log_volume) {
      result.reason = Termination::kVolume;
      break;
    }
    if (result.iterations >= cap) break;
    const auto cut = separator(as_double());
    if (!cut) {
      result.reason = Termination::kFeasibleCenter;
      break;
    }
    if (cut->size() != d) throw std::invalid_argument("cut normal dimension mismatch");
    for (std::size_t k = 0; k < d; ++k) g[k] = static_cast<Scalar>((*cut)[k]);
    // a = J^T g, g'Pg = |a|^2.
    Scalar gpg = 0;
    for (std::size_t c = 0; c < d; ++c) {
      Scalar s = 0;
      for (std::size_t r = 0; r < d; ++r) s += factor[r * d + c] * g[r];
      a[c] = s;
      gpg += s * s;
    }
    if (!(gpg > 0) || !std::isfinite(static_cast<double>(gpg))) {
      std::ostringstream msg;
      msg << "ellipsoid shape degenerated along the cut (g'Pg = " << static_cast<long double>(gpg)
          << ") at iteration " << result.iterations;
      throw NumericalCollapse(msg.str());
    }
    const Scalar norm = std::sqrt(gpg);
    for (std::size_t k = 0; k < d; ++k) a[k] /= norm;
    // b = J a = P g / sqrt(g'Pg).
    for (std::size_t r = 0; r < d; ++r) {
      Scalar s = 0;
      for (std::size_t c = 0; c < d; ++c) s += factor[r * d + c] * a[c];
      b[r] = s;
    }
    for (std::size_t k = 0; k < d; ++k) center[k] -= b[k] / (dd + 1);
    // J <- stretch * J (I - squeeze a a^T); then P' = d^2/(d^2-1) (P - 2/(d+1) b b^T).
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        factor[r * d + c] = stretch * (factor[r * d + c] - squeeze * b[r] * a[c]);
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::isfinite(static_cast<double>(center[k]))) {
        throw NumericalCollapse("ellipsoid centre is not finite at iteration " + std::to_string(result.iterations));
      }
    }
    log_volume += step;
    ++result.iterations;
    if (options.record_trace) result.log_volume_trace.push_back(log_volume);
  }
  result.center = as_double();
  result.final_log_volume = log_volume;
  return result;
}

}  // namespace

double unit_ball_log_volume(std::size_t dimension) {
  const double d = static_cast<double>(dimension);
  return 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
}

double central_cut_log_volume_step(std::size_t dimension) {
  if (dimension == 1) return std::log(0.5);
  const double d = static_cast<double>(dimension);
  return 0.5 * (d * std::log(d * d / (d * d - 1.0)) + std::log((d - 1.0) / (d + 1.0)));
}

CentralCutResult central_cut_ellipsoid(std::span<const double> lower, std::span<const double> upper,
                                       const Separator& separator, const CentralCutOptions& options) {
  if (options.extended_precision) return run_central_cut<long double>(lower, upper, separator, options);
  return run_central_cut<double>(lower, upper, separator, options);
}

EllipsoidRun ellipsoid_run(const Instance& scaled, double guess, double epsilon, bool record_trace) {
  const std::size_t m = scaled.num_items;
  const std::size_t n = scaled.num_agents();
  const std::size_t d = n + m;

  double v_max = 0.0;
  for (const Agent& a : scaled.agents) {
    for (const Rational& v : a.values) v_max = std::max(v_max, v.get_d());
  }
  const double radius = static_cast<double>(m) * v_max * v_max;
  std::vector<double> lower(d), upper(d);
  for (std::size_t k = 0; k < m; ++k) {
    lower[k] = 0.0;
    upper[k] = radius;
  }
  for (std::size_t k = m; k < d; ++k) {
    lower[k] = -radius;
    upper[k] = radius;
  }

  const detail::SeparationOracle oracle(scaled, epsilon);
  CentralCutOptions options;
  options.target_log_volume = static_cast<double>(d) * std::log(epsilon / (4.0 * static_cast<double>(d)));
  options.record_trace = record_trace;

  for (int attempt = 0; attempt < 2; ++attempt) {
    options.extended_precision = attempt == 1;
    EllipsoidRun run;
    run.guess = guess;
    std::set<std::pair<AgentId, ItemSet>> seen;

    Separator separate = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
      // Box cuts keep the centre inside [lower, upper].
      for (std::size_t k = 0; k < d; ++k) {
        if (x[k] < lower[k] || x[k] > upper[k]) {
          std::vector<double> g(d, 0.0);
          g[k] = x[k] < lower[k] ? -1.0 : 1.0;
          return g;
        }
      }
      double total = 0.0;
      for (double v : x) total += v;
      if (total > guess) return std::vector<double>(d, 1.0);

      DualPoint dual{std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m)),
                     std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(m), x.end())};
      auto column = oracle(dual);
      if (!column) return std::nullopt;
      std::vector<double> g(d, 0.0);
      for (ItemId j : column->items) g[j] = -1.0;
      g[m + column->agent] = -1.0;
      if (seen.emplace(column->agent, column->items).second) run.columns.push_back(std::move(*column));
      return g;
    };

    try {
      CentralCutResult r = central_cut_ellipsoid(lower, upper, separate, options);
      run.iterations = r.iterations;
      run.reason = r.reason;
      run.final_log_volume = r.final_log_volume;
      run.log_volume_trace = std::move(r.log_volume_trace);
      return run;
    } catch (const NumericalCollapse&) {
      if (attempt == 1) throw;
    }
  }
  throw NumericalCollapse("unreachable");
}

}  // namespace nsw
