#pragma once

#include <cstdint>
#include <string_view>

namespace sosim {

// Deterministic seed derivation: FNV-1a over (master, domain, index)
// followed by a splitmix64 finalizer. Distinct (domain, index) pairs give
// independent streams; identical inputs give identical outputs on every
// platform. All simulator randomness flows through seeds derived here.
std::uint64_t derive_seed(std::uint64_t master, std::string_view domain,
                          std::uint64_t index);

// Stable hash of an identifier mapped to [-1, 1]; used for persona
// predispositions so an agent's base rating is the same in every run.
double stable_unit_hash(std::string_view id);

// Small counter-based generator (splitmix64). The standard <random>
// distributions are implementation-defined, so bounded ints and gaussians
// are derived by hand to keep replays byte-identical across toolchains.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit();

  // Uniform integer in [lo, hi], unbiased via rejection.
  int next_int(int lo, int hi);

  // Box-Muller; one fresh gaussian per call.
  double next_gaussian(double mean, double stddev);

 private:
  std::uint64_t state_;
};

}  // namespace sosim
