#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nsw/instance.hpp"
#include "oracles.hpp"

using nsw::Allocation;
using nsw::Instance;
using nsw::ItemSet;
using nsw::make_instance;
using nsw::Rational;

namespace {

Instance two_agents(Rational w0, Rational w1, std::vector<Rational> v0, std::vector<Rational> v1) {
  return make_instance({w0, w1}, {std::move(v0), std::move(v1)});
}

Allocation owners(std::vector<std::optional<std::size_t>> o) { return Allocation{std::move(o)}; }

Allocation random_allocation(std::mt19937_64& rng, std::size_t n, std::size_t m, bool total = false) {
  std::uniform_int_distribution<std::size_t> pick(0, total ? n - 1 : n);
  Allocation a = Allocation::unassigned(m);
  for (auto& o : a.owner) {
    const std::size_t k = pick(rng);
    if (k < n) o = k;
  }
  return a;
}

}  // namespace

TEST_CASE("validate accepts a minimal instance") {
  CHECK_NOTHROW(nsw::validate(make_instance({Rational(1)}, {{Rational(5)}})));
}

TEST_CASE("validate rejects weights not summing to one") {
  const Instance inst = two_agents(Rational(1, 2), Rational(1, 3), {1}, {1});
  CHECK_THROWS_AS(nsw::validate(inst), nsw::WeightSumError);
}

TEST_CASE("validate rejects negative values and empty instances") {
  CHECK_THROWS_AS(nsw::validate(make_instance({Rational(1)}, {{Rational(-1)}})), nsw::NegativeValue);
  CHECK_THROWS_AS(nsw::validate(make_instance({}, {})), nsw::EmptyInstance);
  Instance no_items = make_instance({Rational(1)}, {{}});
  CHECK_THROWS_AS(nsw::validate(no_items), nsw::EmptyInstance);
}

TEST_CASE("log_nsw of a single factor") {
  const Instance inst = make_instance({Rational(1)}, {{Rational(5)}});
  CHECK(nsw::log_nsw(inst, owners({0})) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
}

TEST_CASE("log_nsw is the log of the weighted geometric mean") {
  const Instance inst = two_agents(Rational(1, 2), Rational(1, 2), {4, 0}, {0, 9});
  CHECK(nsw::log_nsw(inst, owners({0, 1})) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  CHECK(nsw::nsw(inst, owners({0, 1})) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("zero-weight agents contribute nothing even with empty bundles") {
  const Instance inst = two_agents(Rational(1), Rational(0), {3}, {7});
  CHECK(nsw::log_nsw(inst, owners({0})) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("positively weighted agent with a worthless bundle gives zero welfare") {
  const Instance inst = two_agents(Rational(1, 2), Rational(1, 2), {2, 2}, {2, 2});
  CHECK(nsw::log_nsw(inst, owners({0, 0})) == -std::numeric_limits<double>::infinity());
  CHECK(nsw::nsw(inst, owners({0, 0})) == 0.0);
  CHECK(nsw::nsw(inst, owners({0, 1})) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("scale_values divides by the smallest positive value") {
  SUBCASE("mixed values") {
    const Instance s = nsw::scale_values(make_instance({Rational(1)}, {{Rational(1, 2), Rational(2), Rational(0)}}));
    CHECK(s.agents[0].values == std::vector<Rational>{Rational(1), Rational(4), Rational(0)});
    CHECK(s.scale_of(0) == Rational(1, 2));
  }
  SUBCASE("integers") {
    const Instance s = nsw::scale_values(make_instance({Rational(1)}, {{Rational(3), Rational(7)}}));
    CHECK(s.agents[0].values == std::vector<Rational>{Rational(1), Rational(7, 3)});
    CHECK(s.scale_of(0) == Rational(3));
  }
  SUBCASE("all zero") {
    const Instance s = nsw::scale_values(make_instance({Rational(1)}, {{Rational(0), Rational(0)}}));
    CHECK(s.agents[0].values == std::vector<Rational>{Rational(0), Rational(0)});
    CHECK(s.scale_of(0) == Rational(1));
  }
}

TEST_CASE("scaled values are zero or at least one and report the same welfare") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Instance inst = oracle::random_instance(rng, 3, 5, 9);
    // Fractional values exercise non-integer scale factors.
    for (auto& a : inst.agents) {
      for (auto& v : a.values) v /= 4;
    }
    const Instance s = nsw::scale_values(inst);
    for (const auto& a : s.agents) {
      for (const auto& v : a.values) CHECK((sgn(v) == 0 || v >= 1));
    }
    const Allocation a = random_allocation(rng, 3, 5);
    const double original = nsw::log_nsw(inst, a);
    const double scaled = nsw::log_nsw(s, a);
    if (std::isfinite(original)) CHECK(scaled == doctest::Approx(original).epsilon(1e-12));
    else CHECK(scaled == original);
  }
}

TEST_CASE("welfare differences are invariant under rescaling stored values") {
  // Dividing stored values without recording the scale shifts every finite
  // log welfare by the same constant sum_i w_i ln(1/scale_i).
  std::mt19937_64 rng(12);
  int compared = 0;
  for (int t = 0; t < 300; ++t) {
    const Instance inst = oracle::random_instance(rng, 3, 5, 9, 0.1);
    Instance stripped = nsw::scale_values(inst);
    std::fill(stripped.scale.begin(), stripped.scale.end(), Rational(1));
    const Allocation a = random_allocation(rng, 3, 5, true);
    const Allocation b = random_allocation(rng, 3, 5, true);
    const double da = nsw::log_nsw(inst, a) - nsw::log_nsw(inst, b);
    const double db = nsw::log_nsw(stripped, a) - nsw::log_nsw(stripped, b);
    if (!std::isfinite(da)) continue;
    CHECK(db == doctest::Approx(da).epsilon(1e-12).scale(1.0));
    ++compared;
  }
  CHECK(compared > 50);
}

TEST_CASE("nsw equals exp of log_nsw to 1e-12 relative") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = oracle::random_instance(rng, 3, 6, 10);
    const Allocation a = random_allocation(rng, 3, 6);
    const double l = nsw::log_nsw(inst, a);
    const double v = nsw::nsw(inst, a);
    if (std::isfinite(l)) CHECK(std::abs(v - std::exp(l)) <= 1e-12 * std::exp(l));
    else CHECK(v == 0.0);
  }
}

TEST_CASE("log_nsw is invariant under consistent relabeling of items and agents") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3, m = 6;
    const Instance inst = oracle::random_instance(rng, n, m, 10, 0.1);
    const Allocation a = random_allocation(rng, n, m);
    std::vector<std::size_t> pa(n), pi(m);
    std::iota(pa.begin(), pa.end(), 0);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::vector<Rational> w(n);
    std::vector<std::vector<Rational>> v(n, std::vector<Rational>(m));
    Allocation b = Allocation::unassigned(m);
    for (std::size_t i = 0; i < n; ++i) {
      w[pa[i]] = inst.agents[i].weight;
      for (std::size_t j = 0; j < m; ++j) v[pa[i]][pi[j]] = inst.agents[i].values[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (a.owner[j]) b.owner[pi[j]] = pa[*a.owner[j]];
    }
    const Instance relabeled = make_instance(w, v);
    const double x = nsw::log_nsw(inst, a), y = nsw::log_nsw(relabeled, b);
    if (std::isfinite(x)) CHECK(y == doctest::Approx(x).epsilon(1e-12));
    else CHECK(y == x);
  }
}

TEST_CASE("check_ef1 on hand examples") {
  const std::vector<Rational> v{3, 2, 1};
  CHECK(nsw::check_ef1(v, std::vector<ItemSet>{{0}, {1, 2}}));
  const std::vector<Rational> flat{1, 1, 1, 1};
  CHECK_FALSE(nsw::check_ef1(flat, std::vector<ItemSet>{{}, {0, 1, 2, 3}}));
  const std::vector<Rational> skew{5, 1, 1, 1};
  CHECK(nsw::check_ef1(skew, std::vector<ItemSet>{{0}, {1, 2, 3}}));
}

TEST_CASE("check_ef1 rejects overlapping bundles") {
  const std::vector<Rational> v{1, 1};
  CHECK_THROWS_AS(nsw::check_ef1(v, std::vector<ItemSet>{{0, 1}, {1}}), nsw::OverlappingBundles);
}

TEST_CASE("check_ef1 agrees with the quantifier expansion") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> val(0, 6);
  int positives = 0, negatives = 0;
  for (int t = 0; t < 3000; ++t) {
    const std::size_t m = 1 + t % 8;
    const std::size_t k = 2 + t % 3;
    std::vector<Rational> v(m);
    for (auto& x : v) x = val(rng);
    std::uniform_int_distribution<std::size_t> owner(0, k);  // k: unassigned
    std::vector<ItemSet> bundles(k);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t o = owner(rng);
      if (o < k) bundles[o].push_back(j);
    }
    const bool expected = oracle::ef1_by_quantifiers(v, bundles);
    CHECK(nsw::check_ef1(v, bundles) == expected);
    (expected ? positives : negatives)++;
  }
  CHECK(positives > 100);
  CHECK(negatives > 100);
}
