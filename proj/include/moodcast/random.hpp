#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace moodcast {

/// Seeded generator with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so every draw here
/// is built directly from the raw mt19937_64 stream to keep synthetic data,
/// splits and initializations identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer on [0, n), unbiased by rejection. n must be positive.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  /// Standard normal via Box-Muller (no cached second draw).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven by Rng::index.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.index(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

/// Per-purpose seed derived from a base seed and a stream name, so that each
/// stage owns an independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose);

}  // namespace moodcast
