#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace fedep {

// All randomness in the library flows from a single master seed through
// derive_seed chains. Generators are hand-rolled (xoshiro256**, Box-Muller,
// Marsaglia-Tsang) so that streams are identical across standard libraries
// and platforms; reruns with the same config and seed are byte-reproducible.

/// SplitMix64 avalanche step.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child-seed derivation: one splitmix64 step of (base XOR golden-ratio
/// multiple of the tag). Chain calls to build per-(repeat, round, client,
/// purpose) streams, e.g. derive_seed(derive_seed(master, kRound), round).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64(base ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
}

/// Purpose tags for seed derivation chains.
namespace seed_tag {
inline constexpr std::uint64_t kRepeat = 1;
inline constexpr std::uint64_t kRound = 2;
inline constexpr std::uint64_t kClient = 3;
inline constexpr std::uint64_t kSampling = 4;   // client subset selection
inline constexpr std::uint64_t kInference = 5;  // client-local inference
inline constexpr std::uint64_t kEval = 6;       // marginalized prediction
inline constexpr std::uint64_t kData = 7;       // dataset generation
inline constexpr std::uint64_t kDraw = 8;       // toy-study draw index
}  // namespace seed_tag

/// xoshiro256** seeded via splitmix64 expansion of a 64-bit seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by boosting.
  double gamma(double shape);

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Fisher-Yates shuffle (stdlib shuffles are implementation-defined).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace fedep
