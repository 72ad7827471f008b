#pragma once

#include <cmath>
#include <cstdint>

namespace cuecorr {

// Counter-based generator: every output is a pure function of
// (seed, stream, counter), so a draw is reproducible under any
// parallel schedule as long as each consumer owns its stream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed) ^ mix(stream ^ 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() { return mix(key_ ^ counter_++); }

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal, Box-Muller with a cached spare
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cuecorr
