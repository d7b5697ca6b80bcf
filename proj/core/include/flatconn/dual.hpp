#pragma once

// Optimal 2-Lipschitz test function for the flat,alpha norm, built from a
// minimal decomposition as a maximum of cones.

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "flatconn/flatnorm.hpp"

namespace flatconn {

struct DualCertificate {
  DomainPtr domain;
  std::vector<Point2> pplus;    // free interior positive charges
  std::vector<Point2> pminus;   // free interior negative charges
  std::vector<PolePair> dipoles;  // x = positive end, y = negative end
  std::vector<double> pole_values;  // value at dipoles[k].y
  int iterations_used = 0;
  bool converged = false;
  double gap = 0.0;     // |<T, phi> - primal value| at build time
  bool failed = false;  // not converged, or gap above tolerance
};

inline constexpr double kDualityTolerance = 1e-9;

// Only defined for beta = 2; other values raise UnsupportedError.
DualCertificate build_certificate(const AtomicDistribution& t, const Decomposition& dec);

double evaluate_certificate(const DualCertificate& c, Point2 p);

struct DualityReport {
  double gap = 0.0;
  std::size_t lipschitz_pairs = 0;
  double lipschitz_excess = 0.0;  // max of |phi(p)-phi(q)| - 2|p-q|
  double max_abs = 0.0;           // max |phi| over all sampled points
  double boundary_max = 0.0;      // max |phi| over boundary vertices and edge midpoints
  double activity_residual = 0.0;
  bool gap_ok = false;
  bool lipschitz_ok = false;
  bool range_ok = false;
  bool boundary_ok = false;
  bool activity_ok = false;

  bool passed() const { return gap_ok && lipschitz_ok && range_ok && boundary_ok && activity_ok; }
};

DualityReport verify_duality(const DualCertificate& c, const AtomicDistribution& t, const Decomposition& dec,
                             std::uint64_t seed = 0, std::size_t lipschitz_pairs = 10000);

// Row-major samples over the bounding box, y outermost; exterior nodes are NaN.
struct ScalarGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  BoundingBox box{};
  std::vector<double> values;
};

ScalarGrid sample_on_grid(const DualCertificate& c, std::size_t nx, std::size_t ny);

}  // namespace flatconn
