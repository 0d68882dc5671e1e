#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qpair {

// Deterministic random source. Raw mt19937_64 output is converted to doubles
// with explicit bit arithmetic because std::uniform_real_distribution is
// implementation-defined and would break byte-identical reproducibility
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Flat (uniform) distribution on the probability simplex via normalized
  // unit exponentials.
  std::vector<double> simplex(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - uniform());
      total += x;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Stable per-row seed derivation for resumable sweeps: each row's stream
// depends only on (seed, index), never on how many rows ran before it.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL + index * 0xBF58476D1CE4E5B9ULL);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace qpair
