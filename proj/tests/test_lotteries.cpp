#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gambles/errors.hpp"
#include "gambles/lotteries.hpp"
#include "oracles.hpp"

using namespace gambles;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// n/2 - P (1 - 2^-n) / dt in 113-bit arithmetic, then rounded once.
double st_petersburg_huygens_oracle(int n_max, double price) {
  const __float128 p = price;
  const __float128 null = std::ldexp(1.0, -n_max);
  return static_cast<double>(static_cast<__float128>(n_max) / 2 - p * (1 - null));
}

}  // namespace

TEST_CASE("st petersburg construction") {
  const auto one = st_petersburg(1, 0.0);
  REQUIRE(one.n_max() == 1);
  CHECK(one.payouts[0].amount == 1.0);
  CHECK(one.payouts[0].log_magnitude == 0.0);
  CHECK(one.probabilities[0] == 0.5);
  CHECK(one.null_probability == 0.5);

  const auto ten = st_petersburg(10, 0.0);
  double expected_payout = 0.0;
  for (int n = 0; n < 10; ++n) expected_payout += ten.probabilities[n] * ten.payouts[n].amount;
  CHECK(expected_payout == 5.0);
  for (int n = 1; n <= 10; ++n) {
    CHECK(ten.payouts[n - 1].log_magnitude == doctest::Approx((n - 1) * std::log(2.0)).epsilon(1e-15));
  }
  CHECK(lottery_huygens_rate(st_petersburg(30, 0.0)) == ExtendedReal(15.0));

  CHECK_THROWS_AS(st_petersburg(0, 0.0), ValidationError);
  CHECK_THROWS_AS(st_petersburg(kMaxNmax + 1, 0.0), ValidationError);
  CHECK_THROWS_AS(st_petersburg(5, -1.0), ValidationError);
}

TEST_CASE("probabilities including the null outcome sum to exactly one") {
  for (int n = 1; n <= kExactDyadicNmax; ++n) {
    const auto lottery = st_petersburg(n, 0.0);
    CHECK(lottery.total_probability() == 1.0);
    CHECK(lottery.exact_probabilities());
  }
  CHECK_FALSE(st_petersburg(kExactDyadicNmax + 1, 0.0).exact_probabilities());
}

TEST_CASE("menger construction in log space") {
  const auto m = menger_lottery(50, 0.0);
  CHECK(m.payouts[0].log_magnitude == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(m.payouts[49].log_magnitude == doctest::Approx(5.184705528587072e21).epsilon(1e-14));
  CHECK(m.payouts[49].amount == kInf);
  CHECK(m.payouts[4].amount == doctest::Approx(std::exp(std::exp(5.0))).epsilon(1e-13));

  const auto two = menger_lottery(3, 0.0, 2.0, 2.0);
  CHECK(two.payouts[0].amount == doctest::Approx(4.0));
  CHECK(two.payouts[2].amount == doctest::Approx(256.0));
  CHECK_THROWS_AS(menger_lottery(3, 0.0, 1.0, 2.0), ValidationError);
}

TEST_CASE("to_gamble merges a zero net payout with the null outcome") {
  const Gamble g = to_gamble(st_petersburg(2, 1.0));
  REQUIRE(g.n_max() == 2);
  CHECK(g.outcome(1).wealth_change.amount() == 0.0);
  CHECK(g.outcome(1).probability == 0.75);
  CHECK(g.outcome(2).wealth_change.amount() == 1.0);
  CHECK(g.outcome(2).probability == 0.25);

  const Gamble free = to_gamble(st_petersburg(3, 0.0));
  REQUIRE(free.n_max() == 4);
  CHECK(free.outcome(1).wealth_change.amount() == 0.0);
  CHECK(free.outcome(2).wealth_change.amount() == 1.0);
  CHECK(free.outcome(4).wealth_change.amount() == 4.0);
}

TEST_CASE("menger lottery as a gamble goes through the log-space path") {
  const auto lottery = menger_lottery(10, 0.0);
  const Gamble g = to_gamble(lottery);
  CHECK(g.outcome(g.n_max()).wealth_change.log_scaled());
  const double via_gamble = laplace_rate(g, 1.0);
  const double direct = lottery_log_change(lottery, 1.0).to_double();
  CHECK(std::abs(via_gamble - direct) <= 1e-10 * std::abs(direct));
  CHECK(direct == doctest::Approx(static_cast<double>(oracle::menger_log_change(10, 1, 0))).epsilon(1e-13));
  CHECK(huygens_rate(g) == kInf);
}

TEST_CASE("price sweep") {
  const auto lottery = st_petersburg(10, 0.0);
  const double zero_price_gain = lottery_log_change(lottery, 1.0).to_double();

  std::vector<PricePoint> points;
  for (int k = 0; k < 19; ++k) points.push_back(PricePoint::at(0.1 * k));
  for (double gap : {1e-3, 1e-6, 1e-9, 1e-12, 1e-20}) points.push_back(PricePoint::gap_below_bound(gap));
  const auto sweep = price_sweep(lottery, 1.0, points);
  REQUIRE(sweep.points.size() == points.size());
  CHECK(sweep.points[0].laplace_change.to_double() == zero_price_gain);
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& p = sweep.points[i];
    CHECK(p.laplace_change.is_finite());
    if (i > 0) CHECK(p.laplace_change < sweep.points[i - 1].laplace_change);
    const double gap = points[i].gap(1.0, 1.0);
    if (!points[i].is_gap()) {
      const double oracle_value = static_cast<double>(
          oracle::lottery_log_change(oracle::st_petersburg_terms(10), 1, static_cast<long double>(p.price)));
      CHECK(p.laplace_change.to_double() == doctest::Approx(oracle_value).epsilon(1e-12));
    } else {
      // first term is ln(gap) / 2; later terms see W + D(n) - P = D(n) - 1 + gap
      long double oracle_value = 0.5L * std::log(static_cast<long double>(gap));
      for (int n = 2; n <= 10; ++n) oracle_value += std::ldexp(1.0L, -n) * std::log(std::ldexp(1.0L, n - 1) - 1 + gap);
      CHECK(p.laplace_change.to_double() == doctest::Approx(static_cast<double>(oracle_value)).epsilon(1e-12));
    }
  }
  const double last = sweep.points.back().laplace_change.to_double();
  CHECK(last < -20.0);

  const std::vector<PricePoint> beyond{PricePoint::at(2.0), PricePoint::at(2.5)};
  const auto out = price_sweep(lottery, 1.0, beyond);
  CHECK(out.points[0].laplace_change == ExtendedReal::minus_infinity());
  CHECK(out.points[1].laplace_change == ExtendedReal::minus_infinity());
}

TEST_CASE("price sweep runs the same with any thread count") {
  const auto lottery = menger_lottery(12, 0.0);
  std::vector<PricePoint> points;
  for (int k = 0; k < 50; ++k) points.push_back(PricePoint::at(0.3 * k));
  const auto a = price_sweep(lottery, 1.0, points, 1);
  const auto b = price_sweep(lottery, 1.0, points, 4);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(a.points[i].laplace_change == b.points[i].laplace_change);
    CHECK(a.points[i].bernoulli_value == b.points[i].bernoulli_value);
  }
}

TEST_CASE("menger nmax sweep grows without bound") {
  const std::vector<int> values{5, 10, 20};
  const auto sweep = nmax_sweep(LotteryFamily{LotteryFamily::Kind::menger}, 1.0, 0.5, values);
  REQUIRE(sweep.points.size() == 3);
  CHECK(sweep.points[0].laplace_change < sweep.points[1].laplace_change);
  CHECK(sweep.points[1].laplace_change < sweep.points[2].laplace_change);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double oracle_value = static_cast<double>(oracle::menger_log_change(values[i], 1, 0.5));
    CHECK(sweep.points[i].laplace_change.to_double() == doctest::Approx(oracle_value).epsilon(1e-12));
  }

  std::vector<int> all;
  for (int n = 1; n <= 40; ++n) all.push_back(n);
  const auto full = nmax_sweep(LotteryFamily{LotteryFamily::Kind::menger}, 1.0, 0.5, all);
  for (std::size_t i = 1; i < full.points.size(); ++i) {
    CHECK(full.points[i].laplace_change > full.points[i - 1].laplace_change);
  }
  CHECK(full.points.back().laplace_change > ExtendedReal(1e3));
}

TEST_CASE("st petersburg log change converges in n_max") {
  std::vector<int> values;
  for (int n = 1; n <= 100; ++n) values.push_back(n);
  const auto sweep = nmax_sweep(LotteryFamily{}, 1.0, 0.0, values);
  for (std::size_t i = 60; i < values.size(); ++i) {
    CHECK(std::abs(sweep.points[i].laplace_change.to_double() - sweep.points[i - 1].laplace_change.to_double()) <
          1e-9);
  }
  const double limit = untruncated_log_change(LotteryFamily{}, 1.0, PricePoint::at(0.0)).to_double();
  CHECK(sweep.points.back().laplace_change.to_double() == doctest::Approx(limit).epsilon(1e-14));
  long double partial = 0;
  for (int n = 1; n <= 200; ++n) partial += std::ldexp(1.0L, -n) * std::log1p(std::ldexp(1.0L, n - 1));
  CHECK(limit == doctest::Approx(static_cast<double>(partial)).epsilon(1e-14));
}

TEST_CASE("single-term lotteries") {
  const auto sweep = nmax_sweep(LotteryFamily{}, 3.0, 1.0, std::vector<int>{1});
  CHECK(sweep.points[0].laplace_change.to_double() == doctest::Approx(0.5 * std::log(3.0 / 3.0)));
  const auto menger = nmax_sweep(LotteryFamily{LotteryFamily::Kind::menger}, 1.0, 0.5, std::vector<int>{1});
  CHECK(menger.points[0].laplace_change.to_double() ==
        doctest::Approx(0.5 * std::log(0.5 + std::exp(std::exp(1.0)))).epsilon(1e-14));
}

TEST_CASE("huygens value of the truncated st petersburg lottery") {
  for (int n = 1; n <= kExactDyadicNmax; ++n) {
    for (const double price : {0.0, 1.0, 2.0, 0.1, 3.7, 1e-5, 123.456}) {
      CHECK(lottery_huygens_rate(st_petersburg(n, price)).to_double() == st_petersburg_huygens_oracle(n, price));
    }
  }
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = oracle::integer(1, kExactDyadicNmax);
    const double price = oracle::uniform(0.0, 64.0);
    CHECK(lottery_huygens_rate(st_petersburg(n, price)).to_double() == st_petersburg_huygens_oracle(n, price));
  }
  CHECK(lottery_huygens_rate(menger_lottery(8, 0.0)) == ExtendedReal::plus_infinity());
}

TEST_CASE("untruncated limits") {
  const LotteryFamily menger{LotteryFamily::Kind::menger};
  const double bound = 1.0 + std::exp(std::exp(1.0));
  CHECK(untruncated_log_change(menger, 1.0, PricePoint::at(0.5)) == ExtendedReal::plus_infinity());
  CHECK(untruncated_log_change(menger, 1.0, PricePoint::gap_below_bound(0.0)).is_indeterminate());
  CHECK(untruncated_log_change(menger, 1.0, PricePoint::at(bound + 1.0)) == ExtendedReal::minus_infinity());

  const LotteryFamily slow{LotteryFamily::Kind::menger, 1.5, 2.0};
  const auto converged = untruncated_log_change(slow, 1.0, PricePoint::at(0.5));
  REQUIRE(converged.is_finite());
  const auto truncated = nmax_sweep(slow, 1.0, 0.5, std::vector<int>{150});
  CHECK(converged.to_double() == doctest::Approx(truncated.points[0].laplace_change.to_double()).epsilon(1e-12));

  CHECK(untruncated_log_change(LotteryFamily{}, 1.0, PricePoint::at(2.0)) == ExtendedReal::minus_infinity());
  CHECK(untruncated_log_change(LotteryFamily{}, 1.0, PricePoint::gap_below_bound(1e-30)).to_double() < -30.0);
}

TEST_CASE("maximum acceptable price") {
  SUBCASE("nothing is worth paying for a worthless ticket") {
    const auto worthless = make_lottery("custom", {Payout::from_amount(0.0)}, {0.5}, 0.0);
    const auto s = max_acceptable_price(worthless, 1.0);
    CHECK(s.status == PriceSolution::Status::no_positive_price_acceptable);
    CHECK(s.price == 0.0);
  }
  SUBCASE("st petersburg bisection brackets the root") {
    const auto lottery = st_petersburg(10, 0.0);
    const auto s = max_acceptable_price(lottery, 1.0);
    REQUIRE(s.status == PriceSolution::Status::solved);
    const double tol = 1e-9;
    const auto terms = oracle::st_petersburg_terms(10);
    CHECK(oracle::lottery_log_change(terms, 1, s.price) > 0);
    CHECK(oracle::lottery_log_change(terms, 1, s.price + tol) < 0);
    CHECK(oracle::lottery_log_change(terms, 1, s.price - tol) > 0);
    CHECK(s.price < s.bound);
    CHECK(s.bound == 2.0);
    CHECK(s.iterations <= kMaxBisectionIterations);
  }
  SUBCASE("menger prices stay below W + D(1)") {
    for (int n = 1; n <= 50; ++n) {
      const auto s = max_acceptable_price(menger_lottery(n, 0.0), 1.0);
      CHECK(s.status == PriceSolution::Status::solved);
      CHECK(s.price >= 0.0);
      CHECK(s.price < s.bound);
    }
  }
  SUBCASE("a custom tolerance is honoured") {
    const auto s = max_acceptable_price(st_petersburg(10, 0.0), 1.0, 1e-3);
    const auto fine = max_acceptable_price(st_petersburg(10, 0.0), 1.0, 1e-12);
    CHECK(std::abs(s.price - fine.price) < 1e-3);
    CHECK(s.iterations < fine.iterations);
  }
}
