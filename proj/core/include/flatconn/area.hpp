#pragma once

// Graph area of S1-valued maps and the upper bounds for its relaxations.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flatconn/flatnorm.hpp"
#include "flatconn/jacobian.hpp"

namespace flatconn {

struct QuadratureInfo {
  std::string rule;
  std::size_t triangles = 0;
  std::size_t cells = 0;  // accepted subsquares
  std::size_t evaluations = 0;
  double estimated_error = 0.0;  // absolute
};

struct AreaReport {
  double dirichlet_area = 0.0;  // integral of sqrt(1 + |grad u|^2)
  double singular_term = 0.0;   // flat,alpha norm of Det(grad u), pi included
  double upper_bound = 0.0;
  QuadratureInfo quadrature;
};

struct AreaIntegral {
  double value = 0.0;
  QuadratureInfo info;
};

// Built-in families only; the gradient of the phase is taken in closed form.
AreaIntegral dirichlet_integral(const MapFamily& f, const Domain& d);
double dirichlet_area(const MapFamily& f, const Domain& d);

AreaReport relaxed_area_upper_bound(const MapFamily& f, const DomainPtr& d, NormKind kind = NormKind{2.0});

// Smallest prefix of the pairs (sorted by decreasing length) whose interior
// poles, once removed, leave a remainder of flat,alpha norm at most eps/pi.
std::vector<Point2> puncture_set_for_eps(const AtomicDistribution& t, double eps);

AreaReport punctured_upper_bound(const MapFamily& f, const DomainPtr& d, std::span<const Point2> punctures);

double double_relaxation_value(const MapFamily& f, const Domain& d);

}  // namespace flatconn
