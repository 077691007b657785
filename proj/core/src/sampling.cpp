#include "recsim/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace recsim {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t stable_hash(std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k));
  return h;
}

RngStream::RngStream(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    word = z ^ (z >> 31);
  }
}

RngStream RngStream::restore(std::uint64_t seed,
                             const std::array<std::uint64_t, 4>& words) noexcept {
  RngStream r(seed);
  for (std::size_t i = 0; i < 4; ++i) r.s_[i] = words[i];
  return r;
}

RngStream RngStream::keyed(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return RngStream(h);
}

std::uint64_t RngStream::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) noexcept {
  const double v = lo + (hi - lo) * uniform01();
  // lo + (hi-lo)*u can round up to hi for u close to 1.
  return v < hi ? v : std::nextafter(hi, lo);
}

std::uint64_t RngStream::below(std::uint64_t bound) noexcept {
  __uint128_t m = static_cast<__uint128_t>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

void PowerLawSpec::validate() const {
  if (!(x_min > 0.0)) throw std::invalid_argument("power law: x_min must be > 0");
  if (!(x_max > x_min)) throw std::invalid_argument("power law: x_max must be > x_min");
  if (!(alpha > 1.0)) throw std::invalid_argument("power law: alpha must be > 1");
}

double power_law_quantile(const PowerLawSpec& spec, double u) noexcept {
  if (u <= 0.0) return spec.x_min;
  if (u >= 1.0) return spec.x_max;
  const double e = 1.0 - spec.alpha;
  const double lo = std::pow(spec.x_min, e);
  const double hi = std::pow(spec.x_max, e);
  const double x = std::pow(lo + u * (hi - lo), 1.0 / e);
  if (x < spec.x_min) return spec.x_min;
  if (x > spec.x_max) return spec.x_max;
  return x;
}

double power_law_weight(RngStream& rng, const PowerLawSpec& spec) noexcept {
  return power_law_quantile(spec, rng.uniform01());
}

std::vector<double> fluctuation(RngStream& rng, std::size_t k, double magnitude) {
  std::vector<double> delta(k, 0.0);
  if (magnitude == 0.0) return delta;
  for (double& d : delta) d = magnitude * (2.0 * rng.uniform01() - 1.0);
  return delta;
}

}  // namespace recsim
