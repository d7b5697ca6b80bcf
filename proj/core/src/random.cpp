#include "flatconn/random.hpp"

#include <cmath>
#include <numbers>

namespace flatconn {

Point2 sample_in_domain(const Domain& d, Rng& rng) {
  const BoundingBox box = d.bbox();
  for (;;) {
    const Point2 p{rng.uniform(box.xmin, box.xmax), rng.uniform(box.ymin, box.ymax)};
    if (contains(d, p) == Membership::interior) return p;
  }
}

Point2 sample_in_disc(Point2 c, double radius, Rng& rng) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return {c.x + r * std::cos(phi), c.y + r * std::sin(phi)};
}

}  // namespace flatconn
