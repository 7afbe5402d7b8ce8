#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nsw/config_lp.hpp"
#include "nsw/reference.hpp"
#include "oracles.hpp"

using nsw::Instance;
using nsw::make_instance;
using nsw::Rational;

TEST_CASE("brute force gives a lone agent everything") {
  const Instance inst = make_instance({Rational(1)}, {{Rational(1), Rational(0), Rational(4)}});
  const auto best = nsw::brute_force_opt(inst);
  CHECK(best.log_welfare == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK(best.allocation.owner[0] == 0);
  CHECK(best.allocation.owner[2] == 0);
}

TEST_CASE("brute force on identical (3,1) valuations") {
  const Instance inst = make_instance({Rational(1, 2), Rational(1, 2)}, {{3, 1}, {3, 1}});
  CHECK(std::exp(nsw::brute_force_opt(inst).log_welfare) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("brute force with unequal weights and a unique positive allocation") {
  const Instance inst = make_instance({Rational(2, 3), Rational(1, 3)}, {{6, 0}, {0, 3}});
  const auto best = nsw::brute_force_opt(inst);
  CHECK(best.allocation.owner == std::vector<std::optional<std::size_t>>{0, 1});
  CHECK(std::exp(best.log_welfare) ==
        doctest::Approx(std::pow(6.0, 2.0 / 3.0) * std::pow(3.0, 1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("brute force refuses oversized searches") {
  std::vector<std::vector<Rational>> v(4, std::vector<Rational>(12, Rational(1)));
  const Instance inst = make_instance(std::vector<Rational>(4, Rational(1, 4)), v);
  CHECK_THROWS_AS(nsw::brute_force_opt(inst), nsw::TooLarge);
}

TEST_CASE("brute force matches an independent enumeration and is relabeling invariant") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + t % 3, m = 1 + t % 6;
    const Instance inst = oracle::random_instance(rng, n, m, 10);
    const auto best = nsw::brute_force_opt(inst);
    const double ref = oracle::best_log_welfare(inst);
    CAPTURE(t);
    if (std::isfinite(ref)) {
      CHECK(best.log_welfare == doctest::Approx(ref).epsilon(1e-12));
      CHECK(nsw::log_nsw(inst, best.allocation) == doctest::Approx(ref).epsilon(1e-12));
    } else {
      CHECK(best.log_welfare == ref);
    }
    std::vector<std::size_t> pa(n), pi(m);
    std::iota(pa.begin(), pa.end(), 0);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::vector<Rational> w(n);
    std::vector<std::vector<Rational>> v(n, std::vector<Rational>(m));
    for (std::size_t i = 0; i < n; ++i) {
      w[pa[i]] = inst.agents[i].weight;
      for (std::size_t j = 0; j < m; ++j) v[pa[i]][pi[j]] = inst.agents[i].values[j];
    }
    const double permuted = nsw::brute_force_opt(make_instance(w, v)).log_welfare;
    if (std::isfinite(ref)) CHECK(permuted == doctest::Approx(best.log_welfare).epsilon(1e-12));
    else CHECK(permuted == best.log_welfare);
  }
}

TEST_CASE("positivity check examples") {
  CHECK_FALSE(nsw::positivity_check(make_instance({Rational(1, 2), Rational(1, 2)}, {{1, 0}, {1, 0}})));
  CHECK(nsw::positivity_check(make_instance({Rational(1, 2), Rational(1, 2)}, {{1, 0}, {0, 1}})));
  CHECK(nsw::positivity_check(
      make_instance({Rational(0), Rational(1, 2), Rational(1, 2)}, {{0, 0}, {2, 0}, {0, 3}})));
}

TEST_CASE("positivity check agrees with enumeration") {
  std::mt19937_64 rng(52);
  int negatives = 0;
  for (int t = 0; t < 300; ++t) {
    const Instance inst = oracle::random_instance(rng, 2 + t % 3, 2 + t % 4, 5, 0.6);
    const bool ok = nsw::positivity_check(inst);
    CHECK(ok == std::isfinite(oracle::best_log_welfare(inst)));
    negatives += !ok;
  }
  CHECK(negatives > 30);
}

TEST_CASE("assignment baseline examples") {
  const Instance one = make_instance({Rational(1)}, {{Rational(2), Rational(7), Rational(3)}});
  const auto b1 = nsw::assignment_baseline(one);
  CHECK(b1.allocation.owner == std::vector<std::optional<std::size_t>>{std::nullopt, 0, std::nullopt});
  const Instance two = make_instance({Rational(1, 2), Rational(1, 2)}, {{4, 1}, {1, 4}});
  const auto b2 = nsw::assignment_baseline(two);
  CHECK(b2.allocation.owner == std::vector<std::optional<std::size_t>>{0, 1});
  CHECK(b2.log_welfare == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(nsw::assignment_baseline(make_instance({Rational(1, 2), Rational(1, 2)}, {{1, 0}, {1, 0}})),
                  nsw::Infeasible);
}

TEST_CASE("assignment baseline is optimal and sandwiches the optimum and the LP") {
  std::mt19937_64 rng(53);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 3, m = n + t % 4;
    const Instance inst = oracle::random_instance(rng, n, m, 10, 0.3);
    if (!nsw::positivity_check(inst)) continue;
    const auto b = nsw::assignment_baseline(inst);
    const auto ref = oracle::best_single_item_assignment(inst);
    REQUIRE(ref);
    CAPTURE(t);
    CHECK(b.log_welfare == doctest::Approx(*ref).epsilon(1e-12));
    CHECK(nsw::log_nsw(inst, b.allocation) == doctest::Approx(b.log_welfare).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t owned = 0;
      for (const auto& o : b.allocation.owner) owned += o == i;
      CHECK(owned == (sgn(inst.agents[i].weight) > 0 ? 1u : 0u));
    }
    const double opt = oracle::best_log_welfare(inst);
    const double lp = nsw::full_enumeration_lp(inst).lp_value;
    const double ln_m = std::log(static_cast<double>(m));
    CHECK(b.log_welfare <= opt + 1e-12);
    CHECK(opt <= lp + 1e-9);
    CHECK(lp <= b.log_welfare + ln_m + 1e-9);
    ++checked;
  }
  CHECK(checked > 60);
}
