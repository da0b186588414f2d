#pragma once

#include <cassert>
#include <cstdint>
#include <random>

namespace lns {

// Deterministic random stream. All draws are explicit mappings of the
// mt19937_64 output so sequences are identical across platforms; the
// standard distributions are implementation-defined and must not be used
// anywhere results have to be reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Uniform double in [0, 1), 53 usable bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Rejection sampling keeps the draw exactly
  // uniform for every n.
  int uniform_int(int n) {
    assert(n > 0);
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t rem = (UINT64_MAX % un + 1) % un;  // 2^64 mod n
    const uint64_t limit = UINT64_MAX - rem;          // accept r <= limit
    uint64_t r = next();
    while (r > limit) r = next();
    return static_cast<int>(r % un);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 finalizer; used to derive independent per-run seeds from a
// base seed and a salt (instance hash, seed index, ...).
inline uint64_t mix_seed(uint64_t base, uint64_t salt) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a over bytes; stable content hash for artifact cache keys.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lns
