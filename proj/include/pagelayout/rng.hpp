#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pagelayout {

/// SplitMix64 generator with fixed derived distributions.
///
/// The standard library distributions are implementation-defined, so every
/// derived quantity is spelled out here to keep fixtures reproducible across
/// compilers and across ports to other languages:
///   - next():       state += 0x9E3779B97F4A7C15, then the SplitMix64 finalizer
///   - uniform():    (next() >> 11) * 2^-53, in [0, 1)
///   - normal():     Box-Muller cosine branch, sqrt(-2 ln(1 - u1)) cos(2 pi u2)
///   - uniform_int(lo, hi): lo + floor(uniform() * (hi - lo + 1))
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    const int v = lo + static_cast<int>(std::floor(uniform() * span));
    return v > hi ? hi : v;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::uint64_t state_;
};

} // namespace pagelayout
