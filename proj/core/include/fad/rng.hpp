#pragma once

#include <cstdint>
#include <string>

namespace fad {

/// Counter-seeded xoshiro256** generator with Gaussian draws by inverse CDF
/// (Acklam's rational approximation refined by one Halley step). Fixed
/// algorithm so traces are reproducible across platforms; the identifier
/// below is recorded in every output file.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256**+invcdf";

  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in (0, 1).
  double uniform();
  /// Standard normal via inverse CDF of uniform().
  double normal();

 private:
  std::uint64_t s_[4];
};

/// splitmix64 step, also used to derive per-cell / per-run seeds from a base
/// seed so that parallel execution order cannot change results.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stable seed derivation: hash of (base, a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace fad
