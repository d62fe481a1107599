#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace depbounds {

// SplitMix64 step; used to derive well-separated stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed of substream `stream` of a master seed. Substreams are the unit of
// parallelism everywhere: worker w of a job always owns a fixed set of
// stream indices, and reductions run in stream order, so results depend
// only on (seed, worker count).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
}

// mt19937_64 wrapper producing doubles in the open interval (0,1).
// The standard fully specifies mt19937_64, and the bit-to-double mapping
// below is explicit, so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t idx) {
    return Rng(stream_seed(seed, idx));
  }

  // Uniform on (0,1), strictly interior: (k + 1/2) / 2^52 with k on 52 bits.
  double uniform() {
    return (static_cast<double>(gen_() >> 12) + 0.5) * 0x1.0p-52;
  }

  std::uint64_t bits() { return gen_(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace depbounds
