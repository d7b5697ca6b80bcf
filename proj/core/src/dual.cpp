#include "flatconn/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flatconn/errors.hpp"
#include "flatconn/parallel.hpp"
#include "flatconn/random.hpp"

namespace flatconn {

namespace {

constexpr double kStable = 1e-12;

double psi0(const DualCertificate& c, Point2 p, double depth) {
  double v = std::max(-1.0, -2.0 * depth);
  for (const Point2 x : c.pplus) v = std::max(v, 1.0 - 2.0 * distance(p, x));
  return v;
}

double dipole_cones(const DualCertificate& c, Point2 p) {
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.dipoles.size(); ++k) {
    const auto& dp = c.dipoles[k];
    v = std::max(v, c.pole_values[k] + 2.0 * distance(dp.x, dp.y) - 2.0 * distance(dp.x, p));
  }
  return v;
}

double certificate_at(const DualCertificate& c, Point2 p, double depth) {
  return std::clamp(std::max(psi0(c, p, depth), dipole_cones(c, p)), -1.0, 1.0);
}

struct Probe {
  Point2 p;
  double depth = 0.0;
};

}  // namespace

DualCertificate build_certificate(const AtomicDistribution& t, const Decomposition& dec) {
  if (dec.kind.beta != 2.0) throw UnsupportedError("dual certificate is only available for beta = 2");
  const Domain& d = t.domain();
  DualCertificate c;
  c.domain = t.domain_ptr();
  for (const auto& r : dec.R) {
    if (contains(d, r.location) != Membership::interior) continue;
    (r.multiplicity > 0 ? c.pplus : c.pminus).push_back(r.location);
  }
  for (const auto& s : dec.S) c.dipoles.push_back({s.b(), s.a()});

  const std::size_t m = c.dipoles.size();
  c.pole_values.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Point2 y = c.dipoles[k].y;
    c.pole_values[k] = psi0(c, y, dist_to_boundary(d, y));
  }

  // Psi_m(y_j) = max(Psi_{m-1}(y_j), max_k Psi_{m-1}(y_k) + 2|x_k - y_k| - 2|x_k - y_j|)
  const int cap = static_cast<int>(m) + 2;
  c.converged = m == 0;
  while (!c.converged && c.iterations_used < cap) {
    ++c.iterations_used;
    std::vector<double> next = c.pole_values;
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const Point2 yj = c.dipoles[j].y;
      for (std::size_t k = 0; k < m; ++k) {
        const auto& dk = c.dipoles[k];
        const double cand = c.pole_values[k] + 2.0 * distance(dk.x, dk.y) - 2.0 * distance(dk.x, yj);
        next[j] = std::max(next[j], cand);
      }
      change = std::max(change, next[j] - c.pole_values[j]);
    }
    c.pole_values = std::move(next);
    c.converged = change < kStable;
  }

  c.gap = std::abs(evaluate(t, [&](Point2 p) { return evaluate_certificate(c, p); }) - dec.value);
  c.failed = !c.converged || c.gap > kDualityTolerance;
  return c;
}

double evaluate_certificate(const DualCertificate& c, Point2 p) {
  return certificate_at(c, p, dist_to_boundary(*c.domain, p));
}

DualityReport verify_duality(const DualCertificate& c, const AtomicDistribution& t, const Decomposition& dec,
                             std::uint64_t seed, std::size_t lipschitz_pairs) {
  const Domain& d = *c.domain;
  auto phi = [&](Point2 p) { return evaluate_certificate(c, p); };
  DualityReport rep;

  rep.gap = std::abs(evaluate(t, phi) - dec.value);
  rep.gap_ok = rep.gap <= kDualityTolerance;

  // Half the pairs uniform over the domain, half clustered around the poles.
  std::vector<Point2> poles = c.pplus;
  poles.insert(poles.end(), c.pminus.begin(), c.pminus.end());
  for (const auto& dp : c.dipoles) {
    poles.push_back(dp.x);
    poles.push_back(dp.y);
  }
  Rng rng(seed);
  const double spread = 0.05 * d.diameter();
  const BoundingBox box = d.bbox();
  auto uniform = [&]() {
    for (;;) {
      const Point2 p{rng.uniform(box.xmin, box.xmax), rng.uniform(box.ymin, box.ymax)};
      const Location loc = locate(d, p);
      if (loc.membership == Membership::interior) return Probe{p, loc.boundary_distance};
    }
  };
  auto near_pole = [&]() {
    if (poles.empty()) return uniform();
    const Point2 base = poles[static_cast<std::size_t>(rng.integer(0, static_cast<long>(poles.size()) - 1))];
    for (;;) {
      const Point2 p = sample_in_disc(base, spread, rng);
      const Location loc = locate(d, p);
      if (loc.membership != Membership::exterior) return Probe{p, loc.boundary_distance};
    }
  };
  rep.lipschitz_pairs = lipschitz_pairs;
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lipschitz_pairs; ++i) {
    const bool local = 2 * i >= lipschitz_pairs;
    const Probe p = local ? near_pole() : uniform();
    const Probe q = local ? near_pole() : uniform();
    const double fp = certificate_at(c, p.p, p.depth);
    const double fq = certificate_at(c, q.p, q.depth);
    excess = std::max(excess, std::abs(fp - fq) - 2.0 * distance(p.p, q.p));
    rep.max_abs = std::max({rep.max_abs, std::abs(fp), std::abs(fq)});
  }
  rep.lipschitz_excess = lipschitz_pairs == 0 ? 0.0 : excess;
  rep.lipschitz_ok = rep.lipschitz_excess <= 1e-9;

  auto scan_loop = [&](const Polygon& loop) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Point2 a = loop.vertex(i);
      const Point2 b = loop.vertex(i + 1);
      rep.boundary_max = std::max({rep.boundary_max, std::abs(phi(a)), std::abs(phi(0.5 * (a + b)))});
    }
  };
  scan_loop(d.outer());
  for (const auto& h : d.holes()) scan_loop(h);
  for (const Point2 p : d.punctures()) rep.boundary_max = std::max(rep.boundary_max, std::abs(phi(p)));
  rep.boundary_ok = rep.boundary_max <= 1e-6;

  for (const Point2 x : c.pplus) {
    rep.activity_residual = std::max(rep.activity_residual, std::abs(phi(x) - 1.0));
    rep.max_abs = std::max(rep.max_abs, std::abs(phi(x)));
  }
  for (const Point2 y : c.pminus) {
    rep.activity_residual = std::max(rep.activity_residual, std::abs(phi(y) + 1.0));
    rep.max_abs = std::max(rep.max_abs, std::abs(phi(y)));
  }
  for (const auto& dp : c.dipoles) {
    rep.activity_residual =
        std::max(rep.activity_residual, std::abs(phi(dp.x) - phi(dp.y) - 2.0 * distance(dp.x, dp.y)));
  }
  rep.activity_ok = rep.activity_residual <= kDualityTolerance;
  rep.range_ok = rep.max_abs <= 1.0;
  return rep;
}

ScalarGrid sample_on_grid(const DualCertificate& c, std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) throw ArgumentError("certificate grid needs at least 2 x 2 nodes");
  const Domain& d = *c.domain;
  ScalarGrid g{nx, ny, d.bbox(), std::vector<double>(nx * ny)};
  const double hx = (g.box.xmax - g.box.xmin) / static_cast<double>(nx - 1);
  const double hy = (g.box.ymax - g.box.ymin) / static_cast<double>(ny - 1);
  parallel_for(ny, [&](std::size_t j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Point2 p{g.box.xmin + static_cast<double>(i) * hx, g.box.ymin + static_cast<double>(j) * hy};
      g.values[j * nx + i] = contains(d, p) == Membership::exterior ? std::numeric_limits<double>::quiet_NaN()
                                                                    : evaluate_certificate(c, p);
    }
  });
  return g;
}

}  // namespace flatconn
