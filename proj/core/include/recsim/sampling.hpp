#pragma once

// Seeded random-number utilities.
//
// Every random draw in the simulator comes from an RngStream. The generator
// is xoshiro256** seeded through splitmix64, so the output sequence for a
// given seed is fixed across platforms and compilers (no std:: distributions
// are involved). Golden-seed regression files rely on this.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace recsim {

/// splitmix64 finalizer. Used for seeding and for stable key hashing.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a key sequence. Stable across releases: seeds
/// derived from it are written into result files.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> keys) noexcept;

/// xoshiro256** stream. Single owner; copyable so a snapshot can be replayed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) noexcept;

  /// Independent stream keyed by (seed, keys...). Used where draws must not
  /// depend on the order in which agents are processed.
  static RngStream keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  /// Raw generator state, for snapshots.
  std::array<std::uint64_t, 4> words() const noexcept { return {s_[0], s_[1], s_[2], s_[3]}; }
  static RngStream restore(std::uint64_t seed, const std::array<std::uint64_t, 4>& words) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Uniform double in [lo, hi). Requires lo < hi.
  double uniform(double lo, double hi) noexcept;

  /// Uniform integer in [0, bound). Requires bound > 0. Lemire's method with
  /// rejection, so the result is unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

/// Bounded power-law (truncated Pareto) on [x_min, x_max] with density
/// proportional to x^-alpha.
struct PowerLawSpec {
  double alpha = 3.0;
  double x_min = 1e-6;
  double x_max = 1.0;

  /// Throws std::invalid_argument unless x_max > x_min > 0 and alpha > 1.
  void validate() const;

  friend bool operator==(const PowerLawSpec&, const PowerLawSpec&) = default;
};

/// Inverse CDF of the bounded power law. u = 0 maps to x_min and u = 1 to
/// x_max exactly; the map is monotone non-decreasing in u.
double power_law_quantile(const PowerLawSpec& spec, double u) noexcept;

double power_law_weight(RngStream& rng, const PowerLawSpec& spec) noexcept;

/// k independent components, each uniform in [-magnitude, +magnitude].
std::vector<double> fluctuation(RngStream& rng, std::size_t k, double magnitude);

}  // namespace recsim
