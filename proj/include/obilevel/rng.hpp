#ifndef OBILEVEL_RNG_HPP
#define OBILEVEL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace obilevel {

// Counter-style generator (splitmix64). Every stochastic quantity in the
// library is keyed off explicit 64-bit keys so that replies are pure
// functions of (seed, round, batch, sample); no global RNG state exists.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns 0 so log() below is safe.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; hand-rolled so traces are identical
  // across standard-library implementations.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Order-sensitive key mixing for deriving per-(seed, round, batch, sample,
// block) streams.
inline std::uint64_t mix_keys(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t p : parts) {
    h ^= p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  }
  return h;
}

}  // namespace obilevel

#endif
