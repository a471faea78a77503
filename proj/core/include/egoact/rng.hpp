#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace egoact {

// Seeded generator used everywhere randomness is drawn. The engine is
// mt19937_64 (output fully specified by the standard); the scalar draws are
// implemented here instead of going through std distributions so that byte
// reproducibility does not depend on libstdc++ internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased enough for our purposes (bias < n * 2^-64).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  int int_in(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Box-Muller without caching: consumes two uniforms per call, keeping the
  // draw count independent of call history.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Independent substream for (seed, tag) pairs, e.g. per-sequence draws.
  Rng derive(std::string_view tag) const {
    std::uint64_t h = 1469598103934665603ull ^ seed_;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return Rng(h);
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace egoact
