// nswtool: command-line front end for the weighted NSW solver.
//
//   nswtool solve  -i instance.json [-o alloc.json] [-r report.json] [--epsilon 0.1]
//   nswtool exact  -i instance.json [-o alloc.json]
//   nswtool verify -i instance.json -a alloc.json
//   nswtool gen    --agents 2 --items 6 --dist uniform --seed 7 [-o instance.json]
//   nswtool bench  --dir corpus/ [-o bench.csv] [--jobs 4]

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nsw/config_lp.hpp"
#include "nsw/generator.hpp"
#include "nsw/io.hpp"
#include "nsw/pipeline.hpp"
#include "nsw/reference.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNoPositiveAllocation = 3;
constexpr int kExitNumericalCollapse = 4;
constexpr int kExitTooLarge = 5;

void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) fallback << text;
  else nsw::write_text_file(path, text);
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct SolveArgs {
  std::string instance, output, report;
  double epsilon = 0.1;
  bool gift = false;
  bool no_timing = false;
  std::uint64_t seed = 0;
  std::string mode = "deterministic";
  std::string search = "bisection";
};

int cmd_solve(const SolveArgs& args) {
  const nsw::Instance inst = nsw::read_instance(args.instance);
  nsw::SolveOptions options;
  options.epsilon = args.epsilon;
  options.gift_leftovers = args.gift;
  options.seed = args.seed;
  options.mode = args.mode == "sample" ? nsw::RoundingMode::kSample : nsw::RoundingMode::kDeterministic;
  options.search = args.search == "sweep" ? nsw::GuessSearch::kFullSweep : nsw::GuessSearch::kBisection;
  const nsw::SolveResult result = nsw::solve_instance(inst, options);
  emit(args.output, nsw::to_text(nsw::allocation_to_json(result.allocation)), std::cout);
  emit(args.report, nsw::to_text(nsw::report_json(result, !args.no_timing)), std::cerr);
  return result.positive ? kExitOk : kExitNoPositiveAllocation;
}

int cmd_exact(const std::string& instance_path, const std::string& output) {
  const nsw::Instance inst = nsw::read_instance(instance_path);
  const nsw::ScoredAllocation best = nsw::brute_force_opt(inst);
  emit(output, nsw::to_text(nsw::allocation_to_json(best.allocation)), std::cout);
  nlohmann::json summary{{"nsw", std::exp(best.log_welfare)},
                         {"log_nsw", std::isfinite(best.log_welfare) ? nlohmann::json(best.log_welfare) : nlohmann::json(nullptr)}};
  std::cerr << nsw::to_text(summary);
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& allocation_path) {
  const nsw::Instance inst = nsw::read_instance(instance_path);
  const nsw::Allocation alloc = nsw::read_allocation(allocation_path);
  try {
    nsw::validate_allocation(inst, alloc);
  } catch (const std::invalid_argument& e) {
    throw nsw::InputError(e.what());
  }
  const double log_welfare = nsw::log_nsw(inst, alloc);
  nlohmann::json out{{"nsw", std::exp(log_welfare)},
                     {"log_nsw", std::isfinite(log_welfare) ? nlohmann::json(log_welfare) : nlohmann::json(nullptr)},
                     {"opt_nsw", nullptr},
                     {"ratio", nullptr}};
  try {
    const nsw::ScoredAllocation best = nsw::brute_force_opt(inst);
    const double opt = std::exp(best.log_welfare);
    out["opt_nsw"] = opt;
    if (std::isfinite(log_welfare)) out["ratio"] = std::exp(best.log_welfare - log_welfare);
    else if (opt == 0.0) out["ratio"] = 1.0;
  } catch (const nsw::TooLarge&) {
    // ratio stays null
  }
  std::cout << nsw::to_text(out);
  return kExitOk;
}

int cmd_gen(const nsw::GeneratorOptions& options, const std::string& output) {
  const nsw::Instance inst = nsw::generate_instance(options);
  emit(output, nsw::to_text(nsw::instance_to_json(inst)), std::cout);
  return kExitOk;
}

int cmd_bench(const std::string& dir, const std::string& output, double epsilon, unsigned jobs) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> rows(files.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;
  std::exception_ptr first_exception;

  auto worker = [&]() {
    for (std::size_t k = next++; k < files.size(); k = next++) {
      try {
        const auto start = std::chrono::steady_clock::now();
        const nsw::Instance inst = nsw::read_instance(files[k]);
        nsw::SolveOptions options;
        options.epsilon = epsilon;
        const nsw::SolveResult result = nsw::solve_instance(inst, options);
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        std::string opt_text, ratio_text;
        try {
          const double opt = nsw::brute_force_opt(inst).log_welfare;
          opt_text = format_double(std::exp(opt));
          if (std::isfinite(result.log_welfare)) ratio_text = format_double(std::exp(opt - result.log_welfare));
        } catch (const nsw::TooLarge&) {
        }
        rows[k] = files[k].filename().string() + "," + opt_text + "," + format_double(std::exp(result.lp_value)) +
                  "," + format_double(std::exp(result.log_welfare)) + "," + ratio_text + "," + std::to_string(ms);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_exception) {
          first_error = files[k].string();
          first_exception = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_exception) {
    std::cerr << "error while solving " << first_error << "\n";
    std::rethrow_exception(first_exception);
  }

  std::string csv = "instance,opt,lp,alg,ratio,runtime_ms\n";
  for (const auto& r : rows) csv += r + "\n";
  emit(output, csv, std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Nash social welfare solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Approximate the weighted NSW optimum");
  solve_cmd->add_option("-i,--instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("-o,--output", solve.output, "Allocation JSON (default: stdout)");
  solve_cmd->add_option("-r,--report", solve.report, "Report JSON (default: stderr)");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Approximation slack")->check(CLI::Range(1e-9, 1.0));
  solve_cmd->add_flag("--gift-leftovers", solve.gift, "Give unassigned items to a highest-value agent");
  solve_cmd->add_option("--seed", solve.seed, "Seed for --mode sample");
  solve_cmd->add_option("--mode", solve.mode, "deterministic | sample")
      ->check(CLI::IsMember({"deterministic", "sample"}));
  solve_cmd->add_option("--search", solve.search, "Guess search: bisection | sweep")
      ->check(CLI::IsMember({"bisection", "sweep"}));
  solve_cmd->add_flag("--no-timing", solve.no_timing, "Write runtime_ms as 0");

  std::string exact_instance, exact_output;
  auto* exact_cmd = app.add_subcommand("exact", "Brute-force optimum");
  exact_cmd->add_option("-i,--instance", exact_instance, "Instance JSON")->required();
  exact_cmd->add_option("-o,--output", exact_output, "Allocation JSON (default: stdout)");

  std::string verify_instance, verify_allocation;
  auto* verify_cmd = app.add_subcommand("verify", "Evaluate an allocation, against brute force when small");
  verify_cmd->add_option("-i,--instance", verify_instance, "Instance JSON")->required();
  verify_cmd->add_option("-a,--allocation", verify_allocation, "Allocation JSON")->required();

  nsw::GeneratorOptions gen;
  std::string gen_dist = "uniform", gen_weights = "simplex", gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--agents", gen.agents, "Number of agents")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--items", gen.items, "Number of items")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dist", gen_dist, "uniform | zipf")->check(CLI::IsMember({"uniform", "zipf"}));
  gen_cmd->add_option("--vmax", gen.vmax, "Maximum item value")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--zipf-exponent", gen.zipf_exponent, "Zipf exponent");
  gen_cmd->add_option("--weights", gen_weights, "equal | simplex | dirichlet")
      ->check(CLI::IsMember({"equal", "simplex", "dirichlet"}));
  gen_cmd->add_option("--alpha", gen.dirichlet_alpha, "Dirichlet concentration")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_flag("--require-positive", gen.require_positive, "Resample until positive welfare is possible");
  gen_cmd->add_option("-o,--output", gen_output, "Instance JSON (default: stdout)");

  std::string bench_dir, bench_output;
  double bench_epsilon = 0.1;
  unsigned bench_jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Solve every instance in a directory and emit CSV");
  bench_cmd->add_option("--dir", bench_dir, "Directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("-o,--output", bench_output, "CSV path (default: stdout)");
  bench_cmd->add_option("--epsilon", bench_epsilon, "Approximation slack")->check(CLI::Range(1e-9, 1.0));
  bench_cmd->add_option("--jobs", bench_jobs, "Parallel workers")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*exact_cmd) return cmd_exact(exact_instance, exact_output);
    if (*verify_cmd) return cmd_verify(verify_instance, verify_allocation);
    if (*gen_cmd) {
      gen.values = nsw::parse_value_distribution(gen_dist);
      gen.weights = nsw::parse_weight_distribution(gen_weights);
      return cmd_gen(gen, gen_output);
    }
    if (*bench_cmd) return cmd_bench(bench_dir, bench_output, bench_epsilon, bench_jobs);
  } catch (const nsw::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const nsw::InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const nsw::NumericalCollapse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalCollapse;
  } catch (const nsw::TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
