#include "moodcast/random.hpp"

#include <cmath>
#include <numbers>

#include "moodcast/common.hpp"

namespace moodcast {

double Rng::normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose) {
  // splitmix64 finalizer over the base seed mixed with the purpose hash
  std::uint64_t z = base ^ fnv1a64(purpose);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace moodcast
