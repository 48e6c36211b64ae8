#pragma once

#include <cstdint>
#include <limits>

namespace relsim {

/// Deterministic random stream. One stream per Monte Carlo replication;
/// identical (seed, stream_id) pairs reproduce the sample sequence
/// bit-exactly on every platform, distinct stream_ids give statistically
/// independent sequences. xoshiro256** core seeded through splitmix64.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform in the open interval (0, 1).
  double uniform01();

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi);

  /// Unbiased uniform integer in [0, n); n must be > 0.
  std::uint32_t uniform_below(std::uint32_t n);

  /// Exponential waiting time with the given rate (events per time unit).
  /// rate == 0 yields +infinity (the transition never happens).
  double exponential(double rate);

  /// Normal with mean 0 and the given standard deviation.
  double normal(double sigma);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

/// Inverse CDF of the exponential distribution: the waiting time t with
/// F(t) = 1 - exp(-rate t) = u. Exposed separately so tests can drive it
/// with fixed u.
double exponential_inverse_cdf(double rate, double u);

/// Stationary probability that a two-state component with failure rate
/// lambda and repair rate mu is up: mu / (lambda + mu). Rates must share
/// one time unit.
double steady_state_up_probability(double lambda, double mu);

/// Draws the protection outage threshold, uniform in [p_max, beta p_max].
/// Sampled fresh each time a line enters the overload-alarm condition.
double sample_outage_threshold(double p_max_mw, double beta, RngStream& rng);

/// Hourly stochastic demand deviation, N(0, sigma^2). One draw per hour
/// per control area.
double sample_demand_deviation(double sigma, RngStream& rng);

inline constexpr double kHoursPerYear = 8760.0;

/// Converts a per-year rate to the internal per-hour convention.
inline double per_year_to_per_hour(double rate_y) { return rate_y / kHoursPerYear; }

}  // namespace relsim
