#pragma once

#include <cstdint>

namespace dfm {

// splitmix64: small, fast, and identical on every platform. Used for all
// stochastic behavior so that datasets and policies reproduce bit-exactly.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t value) {
  uint64_t s = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(splitmix64(seed)) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in the open interval (0, 1): sampled values never sit on a bound.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Independent substream: example i of a run draws from substream(master, i)
  // so results do not depend on generation order or thread count.
  static Rng substream(uint64_t master_seed, uint64_t index) {
    return Rng(hash_combine(master_seed, index));
  }

 private:
  uint64_t state_;
};

}  // namespace dfm
