#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rfnn {

// SplitMix64 finalizer. Used to derive independent stream seeds (bootstrap
// replications, folds, repeated runs) from a single base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream ^ 0xA3C59AC2D1E68F07ull));
}

// mt19937_64 with fixed bit-to-value mappings. The standard distributions are
// implementation-defined, so uniforms and shuffles are spelled out here to keep
// results identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n > 0, rejection sampling
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % nn;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return static_cast<std::size_t>(x % nn);
  }

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace rfnn
