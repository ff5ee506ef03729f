#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace submix {

// All randomness in the toolkit flows from one 64-bit master seed through
// named substreams, so individual components (per instance, per pass, per
// channel) are reproducible in isolation. std::mt19937_64 output is fully
// specified by the standard; the mappings below avoid the
// implementation-defined std::*_distribution classes so results are
// identical across platforms.

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed)
      : seed_(splitmix64(seed)), engine_(seed_) {}

  RngStream(std::uint64_t seed, std::string_view name)
      : RngStream(seed ^ fnv1a64(name)) {}

  // Derives an independent child stream; does not consume engine state.
  RngStream substream(std::string_view name) const {
    return RngStream(seed_, name);
  }

  std::uint64_t u64() { return engine_(); }

  // Uniform in [0, n), n > 0. Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int index(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * real01(); }

  bool coin() { return (engine_() & 1ull) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace submix
