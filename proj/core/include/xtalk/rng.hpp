#pragma once

#include <cstdint>
#include <random>

namespace xtalk {

/// Seeded standard-normal stream.
///
/// Algorithm, fixed so other implementations can reproduce the stream:
/// std::mt19937_64 seeded with the 64-bit seed; each uniform is
/// (word >> 11) * 2^-53 (u1 uses 1 - that value so it is never 0);
/// Box-Muller: r = sqrt(-2 ln u1), z0 = r cos(2 pi u2), z1 = r sin(2 pi u2),
/// emitted in that order.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next();
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace xtalk
