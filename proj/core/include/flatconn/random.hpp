#pragma once

// Seeded sampling with the same stream on every platform: the standard
// distributions are implementation-defined, so uniforms are built by hand.

#include <cstdint>
#include <random>

#include "flatconn/geom.hpp"

namespace flatconn {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Uniform interior point of d by rejection from its bounding box.
Point2 sample_in_domain(const Domain& d, Rng& rng);
// Uniform point of the disc of the given radius around c.
Point2 sample_in_disc(Point2 c, double radius, Rng& rng);

}  // namespace flatconn
