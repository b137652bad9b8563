#ifndef DDID_RNG_HPP
#define DDID_RNG_HPP

#include <cstdint>
#include <random>

#include "ddid/types.hpp"

namespace ddid {

/// Deterministic RNG: mt19937_64 with hand-rolled uniform/normal transforms.
/// std::uniform_real_distribution / std::normal_distribution are
/// implementation-defined, which would break the byte-identical-output
/// contract across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Per-trial stream: seed = base_seed + trial_index.
  static Rng stream(std::uint64_t base_seed, std::uint64_t trial_index) {
    return Rng(base_seed + trial_index);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {  // Box-Muller, one value per draw pair
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  Complex complex_normal() {
    const double a = normal(), b = normal();
    return Complex(a, b) / std::sqrt(2.0);
  }

  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ddid

#endif
