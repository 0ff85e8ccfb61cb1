#pragma once

#include <cstdint>
#include <random>

namespace polaron {

/// Random engine used by every sampler. One engine per worker; never shared.
using Rng = std::mt19937_64;

/// Default master seed when neither --seed nor POLARON_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20240521ULL;

/// Independent stream for replicate `index` of a run seeded with `seed`.
/// The mapping is a pure function of (seed, index), so results do not depend
/// on how replicates are scheduled across threads.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform in [0, 1).
double uniform01(Rng& rng);

/// Uniform in (0, 1].
double uniform01_open_left(Rng& rng);

double standard_normal(Rng& rng);

}  // namespace polaron
