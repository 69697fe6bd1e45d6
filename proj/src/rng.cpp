#include "prodlaw/rng.hpp"

#include <cmath>
#include <numbers>

namespace prodlaw {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
  return h;
}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + kGolden * (++counter_)); }

double CounterRng::uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2 * std::log(u1));
  const double a = 2 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

}  // namespace prodlaw
