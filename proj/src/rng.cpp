#include "relsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace relsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97f4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t sm = seed ^ (stream_id * 0xD1B54A32D192ED03ull);
  for (auto& s : state_) s = splitmix64(sm);
  // xoshiro must not start from the all-zero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform01() {
  // 53 significand bits, shifted off the unit endpoints.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint32_t RngStream::uniform_below(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below(0)");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return static_cast<std::uint32_t>(v % n);
}

double RngStream::exponential(double rate) { return exponential_inverse_cdf(rate, uniform01()); }

double RngStream::normal(double sigma) {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_ * sigma;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a) * sigma;
}

double exponential_inverse_cdf(double rate, double u) {
  if (rate < 0) throw std::invalid_argument("exponential rate must be >= 0");
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("u must lie in (0, 1)");
  if (rate == 0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-u) / rate;
}

double steady_state_up_probability(double lambda, double mu) {
  if (lambda < 0) throw std::invalid_argument("failure rate must be >= 0");
  if (!(mu > 0)) throw std::invalid_argument("repair rate must be > 0");
  return mu / (lambda + mu);
}

double sample_outage_threshold(double p_max_mw, double beta, RngStream& rng) {
  if (!(beta > 1)) throw std::invalid_argument("beta must be > 1");
  return rng.uniform(p_max_mw, beta * p_max_mw);
}

double sample_demand_deviation(double sigma, RngStream& rng) {
  if (sigma < 0) throw std::invalid_argument("sigma must be >= 0");
  if (sigma == 0) return 0.0;
  return rng.normal(sigma);
}

}  // namespace relsim
