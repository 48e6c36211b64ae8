#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "relsim/rng.hpp"

using namespace relsim;

TEST_CASE("exponential sampling: closed form and degenerate rate") {
  CHECK(exponential_inverse_cdf(2.0, 0.5) == doctest::Approx(std::log(2.0) / 2.0));
  RngStream rng(1, 1);
  CHECK(std::isinf(rng.exponential(0.0)));
  CHECK_THROWS(exponential_inverse_cdf(-1.0, 0.5));
}

TEST_CASE("exponential mean matches 1/lambda at the hydro failure rate") {
  // 4.42 per year, expressed per hour like the engine does.
  const double rate = per_year_to_per_hour(4.42);
  RngStream rng(20240601, 3);
  double sum_h = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum_h += rng.exponential(rate);
  const double mean_y = sum_h / n / kHoursPerYear;
  CHECK(mean_y == doctest::Approx(1.0 / 4.42).epsilon(0.02));
}

TEST_CASE("exponential samples are strictly positive") {
  RngStream rng(7, 7);
  for (int i = 0; i < 10000; ++i) CHECK(rng.exponential(5.0) > 0.0);
}

TEST_CASE("steady-state up probability") {
  CHECK(steady_state_up_probability(0.3, 0.3) == doctest::Approx(0.5));
  CHECK(steady_state_up_probability(0.0, 0.1) == doctest::Approx(1.0));
  // Nuclear unit: 3 per year vs 0.027 per hour.
  const double p = steady_state_up_probability(per_year_to_per_hour(3.0), 0.027);
  CHECK(p == doctest::Approx(0.98748).epsilon(1e-4));
  CHECK_THROWS(steady_state_up_probability(0.1, 0.0));
}

TEST_CASE("outage threshold sampling stays in [Pmax, beta Pmax] with uniform mean") {
  RngStream rng(5, 2);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = sample_outage_threshold(100.0, 1.4, rng);
    REQUIRE(v >= 100.0);
    REQUIRE(v <= 140.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(120.0).epsilon(0.01));
  CHECK_THROWS(sample_outage_threshold(100.0, 1.0, rng));
}

TEST_CASE("beta near one degenerates to Pmax") {
  RngStream rng(5, 2);
  const double v = sample_outage_threshold(100.0, 1.0 + 1e-12, rng);
  CHECK(v == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("demand deviation: zero sigma and sample std") {
  RngStream rng(11, 4);
  CHECK(sample_demand_deviation(0.0, rng) == 0.0);
  const double sigma = 0.0192;
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = sample_demand_deviation(sigma, rng);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  CHECK(sd == doctest::Approx(sigma).epsilon(0.02));
  CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(n)) * 3.0);
}

TEST_CASE("streams reproduce bit-exactly and differ across ids") {
  RngStream a1(123456789, 42), a2(123456789, 42), b(123456789, 43);
  bool all_equal = true;
  bool any_same_as_b = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a1.next_u64();
    all_equal &= va == a2.next_u64();
    any_same_as_b |= va == b.next_u64();
  }
  CHECK(all_equal);
  CHECK_FALSE(any_same_as_b);
}

TEST_CASE("two areas in the same hour draw independently") {
  RngStream rng(3, 9);
  const double a = sample_demand_deviation(0.0192, rng);
  const double b = sample_demand_deviation(0.0192, rng);
  CHECK(a != b);
}
