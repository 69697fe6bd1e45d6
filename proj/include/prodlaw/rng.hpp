#pragma once

#include <cstdint>
#include <initializer_list>

namespace prodlaw {

std::uint64_t splitmix64(std::uint64_t x);

/// Key of an independent substream: hash of the seed and coordinates.
std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> coords);

/// Counter-based generator: the k-th output is splitmix64(key + k * golden),
/// so a substream never depends on how many values other streams consumed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  std::uint64_t next_u64();
  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform();
  /// Standard normal (Box-Muller, second variate cached).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace prodlaw
