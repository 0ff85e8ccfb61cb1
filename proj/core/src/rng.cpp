#include "polaron/rng.hpp"

#include <cmath>
#include <numbers>

namespace polaron {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state))};
  return Rng(seq);
}

double uniform01(Rng& rng) {
  // 53 random bits; avoids implementation-defined distribution behaviour.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform01_open_left(Rng& rng) { return 1.0 - uniform01(rng); }

double standard_normal(Rng& rng) {
  // Box-Muller, one variate per call so the stream consumption is fixed.
  const double u1 = uniform01_open_left(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace polaron
