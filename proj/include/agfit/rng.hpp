#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace agfit {

// splitmix64 step; used both as a stand-alone mixer and to derive
// independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for logical stream `stream` of a master seed.  Every parallel task
// (Monte-Carlo trial, expectation sample, ...) draws from its own engine
// seeded this way, so results do not depend on thread count or schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

// mt19937_64 wrapper with portable distributions.  The standard pins the
// engine's output sequence but not the library distributions, so uniforms,
// Bernoullis and binomials are implemented here to keep byte-identical
// outputs across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound) {
    std::uint64_t mask = ~0ULL;
    if ((bound & (bound - 1)) != 0 || bound == 0) {
      std::uint64_t v = bound - 1;
      v |= v >> 1; v |= v >> 2; v |= v >> 4;
      v |= v >> 8; v |= v >> 16; v |= v >> 32;
      mask = v;
    } else {
      mask = bound - 1;
    }
    std::uint64_t draw;
    do {
      draw = eng_() & mask;
    } while (draw >= bound);
    return draw;
  }

  double exponential() { return -std::log1p(-uniform01()); }

  // Binomial(n, p) count.  Small n counts Bernoullis directly; larger n
  // walks geometric gaps between successes, which costs O(n*p) draws.
  long long binomial(long long n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);
    if (n <= 64) {
      long long c = 0;
      for (long long i = 0; i < n; ++i) c += bernoulli(p) ? 1 : 0;
      return c;
    }
    const double log_q = std::log1p(-p);
    long long count = 0;
    long long pos = 0;
    while (true) {
      double u = 1.0 - uniform01();  // in (0, 1]
      long long gap = static_cast<long long>(std::floor(std::log(u) / log_q));
      pos += gap + 1;
      if (pos > n) break;
      ++count;
    }
    return count;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace agfit
