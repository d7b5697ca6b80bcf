#include "flatconn/area.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

#include "flatconn/errors.hpp"
#include "flatconn/parallel.hpp"

namespace flatconn {

namespace {

constexpr int kOrder = 10;
constexpr int kMaxDepth = 12;
constexpr double kAbsTol = 1e-11;
constexpr double kRelTol = 1e-10;

// Gauss-Legendre rule mapped to [0, 1].
struct Rule {
  std::array<double, kOrder> x{};
  std::array<double, kOrder> w{};

  Rule() {
    using G = boost::math::quadrature::gauss<double, kOrder>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    // Boost stores the non-negative half of the symmetric rule.
    for (int i = 0; i < kOrder / 2; ++i) {
      x[kOrder / 2 - 1 - i] = 0.5 - 0.5 * a[i];
      x[kOrder / 2 + i] = 0.5 + 0.5 * a[i];
      w[kOrder / 2 - 1 - i] = w[kOrder / 2 + i] = 0.5 * wt[i];
    }
  }
};

const Rule& rule() {
  static const Rule r;
  return r;
}

class Integrand {
 public:
  explicit Integrand(std::vector<Vortex> v) : vortices_(std::move(v)) {}

  double operator()(Point2 p) const {
    double gx = 0.0;
    double gy = 0.0;
    for (const auto& v : vortices_) {
      const double dx = p.x - v.center.x;
      const double dy = p.y - v.center.y;
      const double r2 = dx * dx + dy * dy;
      gx -= v.degree * dy / r2;
      gy += v.degree * dx / r2;
    }
    return std::sqrt(1.0 + gx * gx + gy * gy);
  }

 private:
  std::vector<Vortex> vortices_;
};

struct Tri {
  Point2 a, b, c;  // a is the Duffy apex
};

struct Partial {
  double value = 0.0;
  double error = 0.0;
  std::size_t cells = 0;
  std::size_t evaluations = 0;
};

class TriangleIntegrator {
 public:
  TriangleIntegrator(const Integrand& f, std::span<const Point2> singular, double scale)
      : f_(f), singular_(singular), tol_(1e-12 * scale) {}

  void run(const Tri& t, Partial& out) const { split(t, out, 0); }

 private:
  bool is_singular(Point2 p) const {
    return std::any_of(singular_.begin(), singular_.end(), [&](Point2 s) { return distance(p, s) <= tol_; });
  }

  void split(const Tri& t, Partial& out, int level) const {
    const double area2 = cross(t.b - t.a, t.c - t.a);
    const double longest = std::max({distance(t.a, t.b), distance(t.b, t.c), distance(t.c, t.a)});
    if (std::abs(area2) <= 1e-14 * longest * longest) return;
    if (level > 64) throw ArgumentError("area quadrature could not isolate singular points");

    // A singular point inside or on the triangle (not at a vertex) becomes a vertex.
    for (const Point2 s : singular_) {
      if (distance(s, t.a) <= tol_ || distance(s, t.b) <= tol_ || distance(s, t.c) <= tol_) continue;
      const double l1 = cross(t.b - s, t.c - s) / area2;
      const double l2 = cross(t.c - s, t.a - s) / area2;
      const double l3 = 1.0 - l1 - l2;
      if (l1 >= -1e-12 && l2 >= -1e-12 && l3 >= -1e-12) {
        split({s, t.b, t.c}, out, level + 1);
        split({s, t.c, t.a}, out, level + 1);
        split({s, t.a, t.b}, out, level + 1);
        return;
      }
    }

    const std::array<Point2, 3> v{t.a, t.b, t.c};
    std::array<bool, 3> sing{is_singular(t.a), is_singular(t.b), is_singular(t.c)};
    const int count = sing[0] + sing[1] + sing[2];
    if (count >= 2) {
      // Separate two singular vertices at the midpoint of their edge.
      int i = 0;
      while (!(sing[i] && sing[(i + 1) % 3])) ++i;
      const Point2 p = v[i], q = v[(i + 1) % 3], r = v[(i + 2) % 3];
      const Point2 m = 0.5 * (p + q);
      split({p, m, r}, out, level + 1);
      split({m, q, r}, out, level + 1);
      return;
    }
    int apex = 0;
    for (int i = 0; i < 3; ++i) {
      if (sing[i]) apex = i;
    }
    integrate({v[apex], v[(apex + 1) % 3], v[(apex + 2) % 3]}, out);
  }

  // Duffy map of the unit square onto the triangle, collapsing u = 0 onto the apex.
  double square(const Tri& t, double area2, double u0, double u1, double v0, double v1, Partial& out) const {
    const Rule& g = rule();
    const double du = u1 - u0;
    const double dv = v1 - v0;
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      const double u = u0 + du * g.x[i];
      double inner = 0.0;
      for (int j = 0; j < kOrder; ++j) {
        const double vv = v0 + dv * g.x[j];
        const Point2 p = t.a + u * ((t.b - t.a) + vv * (t.c - t.b));
        inner += g.w[j] * f_(p);
      }
      sum += g.w[i] * u * inner;
    }
    out.evaluations += kOrder * kOrder;
    return sum * du * dv * area2;
  }

  void refine(const Tri& t, double area2, double u0, double u1, double v0, double v1, double whole, int depth,
              Partial& out) const {
    const double um = 0.5 * (u0 + u1);
    const double vm = 0.5 * (v0 + v1);
    const std::array<std::array<double, 4>, 4> kids{{{u0, um, v0, vm}, {um, u1, v0, vm}, {u0, um, vm, v1}, {um, u1, vm, v1}}};
    std::array<double, 4> q{};
    for (int k = 0; k < 4; ++k) q[k] = square(t, area2, kids[k][0], kids[k][1], kids[k][2], kids[k][3], out);
    const double parts = q[0] + q[1] + q[2] + q[3];
    const double diff = std::abs(whole - parts);
    const double share = (u1 - u0) * (v1 - v0);
    if (diff <= std::max(kAbsTol * std::abs(area2) * share, kRelTol * std::abs(parts)) || depth >= kMaxDepth) {
      out.value += parts;
      out.error += diff;
      out.cells += 4;
      return;
    }
    for (int k = 0; k < 4; ++k) refine(t, area2, kids[k][0], kids[k][1], kids[k][2], kids[k][3], q[k], depth + 1, out);
  }

  void integrate(const Tri& t, Partial& out) const {
    const double area2 = cross(t.b - t.a, t.c - t.a);
    const double whole = square(t, area2, 0.0, 1.0, 0.0, 1.0, out);
    refine(t, area2, 0.0, 1.0, 0.0, 1.0, whole, 1, out);
  }

  const Integrand& f_;
  std::span<const Point2> singular_;
  double tol_;
};

}  // namespace

AreaIntegral dirichlet_integral(const MapFamily& f, const Domain& d) {
  if (std::holds_alternative<CustomPhase>(f.kind)) {
    throw UnsupportedError("graph area needs a built-in map family");
  }
  const auto vortices = vortices_of(f);
  const Integrand integrand(vortices);
  std::vector<Point2> singular;
  for (const auto& v : vortices) singular.push_back(v.center);

  // Signed fan from one outer vertex over every loop; holes run clockwise so
  // their triangles subtract.
  const Point2 apex = d.outer().vertex(0);
  std::vector<Tri> fan;
  for (const auto& e : d.edges()) {
    if (e.a == apex || e.b == apex) continue;
    fan.push_back({apex, e.a, e.b});
  }

  const TriangleIntegrator integrator(integrand, singular, std::max(1.0, d.diameter()));
  std::vector<Partial> parts(fan.size());
  parallel_for(fan.size(), [&](std::size_t k) { integrator.run(fan[k], parts[k]); });

  AreaIntegral out;
  out.info.rule = "gauss-legendre-10x10, duffy, adaptive";
  out.info.triangles = fan.size();
  for (const auto& p : parts) {
    out.value += p.value;
    out.info.estimated_error += p.error;
    out.info.cells += p.cells;
    out.info.evaluations += p.evaluations;
  }
  return out;
}

double dirichlet_area(const MapFamily& f, const Domain& d) { return dirichlet_integral(f, d).value; }

namespace {

AreaReport bound_report(const MapFamily& f, const Domain& d, const AtomicDistribution& atoms, NormKind kind) {
  const AreaIntegral integral = dirichlet_integral(f, d);
  AreaReport rep;
  rep.dirichlet_area = integral.value;
  rep.quadrature = integral.info;
  rep.singular_term = atoms.measure_scale() * solve_matching(atoms, kind).value;
  rep.upper_bound = rep.dirichlet_area + rep.singular_term;
  return rep;
}

}  // namespace

AreaReport relaxed_area_upper_bound(const MapFamily& f, const DomainPtr& d, NormKind kind) {
  return bound_report(f, *d, analytic_jacobian_atoms(f, d), kind);
}

std::vector<Point2> puncture_set_for_eps(const AtomicDistribution& t, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  const AtomicDistribution p = t.satisfies_P() ? t : to_property_P(t);
  const Domain& d = p.domain();
  const auto pairs = p.pairs();
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return distance(pairs[i].x, pairs[i].y) > distance(pairs[j].x, pairs[j].y);
  });

  const double threshold = eps / std::numbers::pi;
  std::vector<Point2> punctures;
  for (std::size_t m = 0;; ++m) {
    if (solve_matching(restrict(p, punctures), NormKind{2.0}).value <= threshold || m == order.size()) {
      return punctures;
    }
    const auto& pp = pairs[order[m]];
    if (contains(d, pp.x) == Membership::interior) punctures.push_back(pp.x);
    if (contains(d, pp.y) == Membership::interior) punctures.push_back(pp.y);
  }
}

AreaReport punctured_upper_bound(const MapFamily& f, const DomainPtr& d, std::span<const Point2> punctures) {
  return bound_report(f, *d, restrict(analytic_jacobian_atoms(f, d), punctures), NormKind{2.0});
}

double double_relaxation_value(const MapFamily& f, const Domain& d) { return dirichlet_area(f, d); }

}  // namespace flatconn
