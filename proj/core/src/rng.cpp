#include "trendrank/rng.hpp"

#include <bit>
#include <cmath>

namespace trendrank {

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01_halfopen();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::int64_t RngStream::binomial_half(std::int64_t m) {
  std::int64_t count = 0;
  std::int64_t remaining = m;
  while (remaining >= 64) {
    count += std::popcount(engine_());
    remaining -= 64;
  }
  if (remaining > 0) {
    const std::uint64_t mask = (~std::uint64_t{0}) >> (64 - remaining);
    count += std::popcount(engine_() & mask);
  }
  return count;
}

}  // namespace trendrank
