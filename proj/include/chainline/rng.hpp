#pragma once

#include <cstdint>
#include <string_view>

namespace chainline {

// Deterministic splitmix64 stream. All randomness in the project flows from
// one root seed; independent streams are derived with split(), which hashes a
// textual tag into the root seed so that adding a new consumer never perturbs
// the draws of existing ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0. Modulo bias is negligible for the small ranges
  // used here and keeps the draw sequence platform-independent.
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  Rng split(std::string_view tag) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return Rng(seed_ ^ h);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace chainline
