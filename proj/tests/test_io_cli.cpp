#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "nsw/generator.hpp"
#include "nsw/io.hpp"
#include "nsw/rational.hpp"
#include "nsw/reference.hpp"

namespace fs = std::filesystem;
using nsw::Rational;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nsw_cli_" + std::to_string(::getpid()) + "_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Runs nswtool with `args`, capturing stdout and stderr into files; returns the exit code.
int run_tool(const std::string& args, const fs::path& out, const fs::path& err) {
  const std::string cmd = std::string(NSWTOOL_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSingleAgent = R"({"num_items": 3, "agents": [{"weight": "1", "values": ["2", "0", "3/2"]}]})";

}  // namespace

TEST_CASE("rational parsing accepts fractions, integers and decimals") {
  CHECK(nsw::parse_rational("1/3") == Rational(1, 3));
  CHECK(nsw::parse_rational("-4/6") == Rational(-2, 3));
  CHECK(nsw::parse_rational("7") == Rational(7));
  CHECK(nsw::parse_rational("0.25") == Rational(1, 4));
  CHECK(nsw::parse_rational("-3.5e-2") == Rational(-7, 200));
  CHECK(nsw::parse_rational("1E3") == Rational(1000));
  CHECK_THROWS_AS(nsw::parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(nsw::parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(nsw::parse_rational(""), std::invalid_argument);
}

TEST_CASE("rational formatting always writes p/q") {
  CHECK(nsw::format_rational(Rational(3)) == "3/1");
  CHECK(nsw::format_rational(Rational(-2) / 4) == "-1/2");
  CHECK(nsw::rational_from_double(0.375) == Rational(3, 8));
}

TEST_CASE("log of huge rationals stays accurate") {
  Rational big(1);
  for (int k = 0; k < 400; ++k) big *= 10;
  CHECK(nsw::log_rational(big) == doctest::Approx(400 * std::log(10.0)).epsilon(1e-14));
  CHECK(nsw::log_rational(1 / big) == doctest::Approx(-400 * std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("instance JSON accepts both weight notations and round-trips") {
  const auto j = nsw::parse_json_text(
      R"({"num_items": 2, "agents": [{"weight": "0.25", "values": ["1/2", 3]},
                                    {"weight": "3/4", "values": [0, "2.5"]}]})",
      "inline");
  const nsw::Instance inst = nsw::instance_from_json(j);
  CHECK(inst.agents[0].weight == Rational(1, 4));
  CHECK(inst.agents[1].weight == Rational(3, 4));
  CHECK(inst.agents[0].values[0] == Rational(1, 2));
  CHECK(inst.agents[1].values[1] == Rational(5, 2));
  const auto out = nsw::instance_to_json(inst);
  CHECK(out["agents"][0]["weight"] == "1/4");
  CHECK(out["agents"][1]["values"][1] == "5/2");
  const nsw::Instance back = nsw::instance_from_json(out);
  CHECK(back.agents[1].values == inst.agents[1].values);
  CHECK(nsw::to_text(out) == nsw::to_text(nsw::instance_to_json(back)));
}

TEST_CASE("instance JSON rejects invalid content") {
  auto load = [](const char* text) { return nsw::instance_from_json(nsw::parse_json_text(text, "t")); };
  CHECK_THROWS_AS(load(R"({"num_items": 1, "agents": [{"weight": "1/2", "values": ["1"]}]})"), nsw::InputError);
  CHECK_THROWS_AS(load(R"({"num_items": 2, "agents": [{"weight": "1", "values": ["1"]}]})"), nsw::InputError);
  CHECK_THROWS_AS(load(R"({"num_items": 1, "agents": [{"weight": "1", "values": ["-1"]}]})"), nsw::InputError);
  CHECK_THROWS_AS(load(R"({"num_items": 1, "agents": [{"weight": "x", "values": ["1"]}]})"), nsw::InputError);
  CHECK_THROWS_AS(load(R"({"agents": []})"), nsw::InputError);
}

TEST_CASE("malformed JSON is reported with line and column") {
  const std::string text = "{\n  \"num_items\": 2,\n  \"agents\": [,]\n}\n";
  try {
    nsw::parse_json_text(text, "broken.json");
    FAIL("expected a parse error");
  } catch (const nsw::InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.rfind("broken.json:3:", 0) == 0);
  }
}

TEST_CASE("allocation JSON round-trips with unassigned items") {
  nsw::Allocation a = nsw::Allocation::unassigned(3);
  a.owner[1] = 2;
  const auto j = nsw::allocation_to_json(a);
  CHECK(j.dump() == R"({"owner":[null,2,null]})");
  CHECK(nsw::allocation_from_json(j).owner == a.owner);
  CHECK_THROWS_AS(nsw::allocation_from_json(nsw::parse_json_text(R"({"owner":[-1]})", "t")), nsw::InputError);
}

TEST_CASE("generator is seeded, integral and normalized") {
  for (const auto dist : {nsw::ValueDistribution::kUniform, nsw::ValueDistribution::kZipf}) {
    for (const auto weights :
         {nsw::WeightDistribution::kEqual, nsw::WeightDistribution::kSimplex, nsw::WeightDistribution::kDirichlet}) {
      nsw::GeneratorOptions o;
      o.agents = 3;
      o.items = 6;
      o.values = dist;
      o.weights = weights;
      o.seed = 99;
      const auto a = nsw::generate_instance(o);
      const auto b = nsw::generate_instance(o);
      CHECK(nsw::to_text(nsw::instance_to_json(a)) == nsw::to_text(nsw::instance_to_json(b)));
      CHECK_NOTHROW(nsw::validate(a));
      for (const auto& ag : a.agents) {
        for (const auto& v : ag.values) {
          CHECK(v.get_den() == 1);
          CHECK(v >= 0);
          CHECK(v <= 10);
        }
      }
    }
  }
  nsw::GeneratorOptions p;
  p.agents = 3;
  p.items = 3;
  p.require_positive = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    p.seed = s;
    CHECK(nsw::positivity_check(nsw::generate_instance(p)));
  }
}

TEST_CASE("cli gen is byte-identical for a fixed seed") {
  TempDir dir;
  const std::string args = "gen --agents 2 --items 6 --dist uniform --seed 7 -o ";
  REQUIRE(run_tool(args + (dir / "a.json").string(), dir / "o", dir / "e") == 0);
  REQUIRE(run_tool(args + (dir / "b.json").string(), dir / "o", dir / "e") == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK_NOTHROW(nsw::read_instance(dir / "a.json"));
}

TEST_CASE("cli solve gives a lone agent all positive items") {
  TempDir dir;
  spit(dir / "one.json", kSingleAgent);
  const int code = run_tool("solve -i " + (dir / "one.json").string() + " -o " + (dir / "alloc.json").string() +
                                " -r " + (dir / "report.json").string(),
                            dir / "o", dir / "e");
  REQUIRE(code == 0);
  const auto alloc = nsw::read_allocation(dir / "alloc.json");
  CHECK(alloc.owner[0] == 0);
  CHECK(alloc.owner[2] == 0);
  const auto report = nsw::read_json_file(dir / "report.json");
  for (const char* key : {"nsw", "log_nsw", "lp_value", "epsilon", "matchings", "runtime_ms"}) CHECK(report.contains(key));
  CHECK(report["nsw"].get<double>() == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(report["epsilon"].get<double>() == 0.1);
}

TEST_CASE("cli solve exits 3 when no positive allocation exists") {
  TempDir dir;
  spit(dir / "bad.json",
       R"({"num_items": 1, "agents": [{"weight": "1/2", "values": ["1"]}, {"weight": "1/2", "values": ["1"]}]})");
  const int code = run_tool("solve -i " + (dir / "bad.json").string() + " -r " + (dir / "report.json").string(),
                            dir / "alloc.json", dir / "e");
  CHECK(code == 3);
  CHECK(nsw::read_json_file(dir / "report.json")["nsw"].get<double>() == 0.0);
  CHECK_NOTHROW(nsw::read_allocation(dir / "alloc.json"));
}

TEST_CASE("cli reports invalid input with exit 2 and line context") {
  TempDir dir;
  spit(dir / "broken.json", "{\n \"num_items\": 1,\n \"agents\": [\n");
  CHECK(run_tool("solve -i " + (dir / "broken.json").string(), dir / "o", dir / "e") == 2);
  CHECK(slurp(dir / "e").find("broken.json:") != std::string::npos);
  spit(dir / "weights.json", R"({"num_items": 1, "agents": [{"weight": "1/3", "values": ["1"]}]})");
  CHECK(run_tool("solve -i " + (dir / "weights.json").string(), dir / "o", dir / "e") == 2);
  CHECK(run_tool("solve -i " + (dir / "missing.json").string(), dir / "o", dir / "e") == 2);
}

TEST_CASE("cli verify on the exact optimum gives ratio one") {
  TempDir dir;
  spit(dir / "inst.json",
       R"({"num_items": 4, "agents": [{"weight": "1/3", "values": ["5", "1", "0", "2"]},
                                      {"weight": "2/3", "values": ["1", "4", "4", "1"]}]})");
  REQUIRE(run_tool("exact -i " + (dir / "inst.json").string() + " -o " + (dir / "opt.json").string(), dir / "o",
                   dir / "e") == 0);
  REQUIRE(run_tool("verify -i " + (dir / "inst.json").string() + " -a " + (dir / "opt.json").string(),
                   dir / "v.json", dir / "e") == 0);
  const auto v = nsw::read_json_file(dir / "v.json");
  CHECK(v["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli bench writes the documented CSV") {
  TempDir dir;
  fs::create_directories(dir / "corpus");
  for (int s = 0; s < 3; ++s) {
    REQUIRE(run_tool("gen --agents 2 --items 4 --require-positive --seed " + std::to_string(s) + " -o " +
                         (dir / "corpus" / ("i" + std::to_string(s) + ".json")).string(),
                     dir / "o", dir / "e") == 0);
  }
  REQUIRE(run_tool("bench --dir " + (dir / "corpus").string() + " --jobs 2 -o " + (dir / "b.csv").string(), dir / "o",
                   dir / "e") == 0);
  std::istringstream csv(slurp(dir / "b.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "instance,opt,lp,alg,ratio,runtime_ms");
  int rows = 0;
  const double bound = std::exp(1.0 / std::exp(1.0)) + 0.1;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 6);
    CHECK(std::stod(cells[4]) <= bound);
  }
  CHECK(rows == 3);
}
