#pragma once

#include <cstdint>

namespace modvar {

// Deterministic splittable generator (splitmix64 core). The standard
// distributions are not specified bit-for-bit across implementations
// and the CLI promises byte-identical reports for identical seeds, so
// the whole chain lives here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform over {0, ..., n-1}, unbiased by rejection.
  std::uint64_t uniform(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Independent child stream; depends only on (current state, tag).
  Rng split(std::uint64_t tag) const {
    Rng child(state_ ^ (0x6a09e667f3bcc909ULL + tag * 0x9e3779b97f4a7c15ULL));
    child.next();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace modvar
