#pragma once

#include <cstdint>
#include <random>

namespace qaff {

// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(mix64(master) ^ a) ^ (b * 0xd1342543de82ef95ULL));
}

// mt19937_64 with a platform-independent double conversion (std distributions
// are implementation-defined, which would break report reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  double sign() { return (eng_() >> 63) ? -1.0 : 1.0; }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace qaff
