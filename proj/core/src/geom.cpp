#include "flatconn/geom.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "flatconn/errors.hpp"

namespace flatconn {

namespace {

// Proper or touching intersection of closed segments [p,p2] and [q,q2].
bool segments_touch(Point2 p, Point2 p2, Point2 q, Point2 q2) {
  auto orient = [](Point2 a, Point2 b, Point2 c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_box = [](Point2 a, Point2 b, Point2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
  };
  const int o1 = orient(p, p2, q);
  const int o2 = orient(p, p2, q2);
  const int o3 = orient(q, q2, p);
  const int o4 = orient(q, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_box(p, p2, q)) return true;
  if (o2 == 0 && on_box(p, p2, q2)) return true;
  if (o3 == 0 && on_box(q, q2, p)) return true;
  if (o4 == 0 && on_box(q, q2, p2)) return true;
  return false;
}

void require_simple(const Polygon& poly, const char* what) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly.vertex(i);
    const Point2 b = poly.vertex(i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex by construction
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(a, b, poly.vertex(j), poly.vertex(j + 1))) {
        throw DomainError(std::string(what) + ": loop is self-intersecting (edges " +
                          std::to_string(i) + " and " + std::to_string(j) + ")");
      }
    }
  }
}

bool loops_touch(const Polygon& a, const Polygon& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_touch(a.vertex(i), a.vertex(i + 1), b.vertex(j), b.vertex(j + 1))) return true;
    }
  }
  return false;
}

// Crossing parity over the loops only (punctures ignored); used by clipping.
bool inside_loops(const Domain& d, Point2 p) {
  bool inside = false;
  for (const auto& e : d.edges()) {
    if ((e.a.y > p.y) != (e.b.y > p.y)) {
      const double xc = e.a.x + (p.y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

// Loop-only classification for a point on a clipped sub-interval.
Membership classify_loops(const Domain& d, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : d.edges()) best = std::min(best, project_to_segment(p, e.a, e.b).distance);
  if (best <= d.eps_geom()) return Membership::boundary;
  return inside_loops(d, p) ? Membership::interior : Membership::exterior;
}

// Sorted parameters in [0,1] where s meets a boundary edge, including 0 and 1.
std::vector<double> breakpoints(const Domain& d, const Segment& s) {
  const Point2 p = s.a();
  const Point2 r = s.b() - s.a();
  const double rr = dot(r, r);
  const double len = std::sqrt(rr);
  std::vector<double> ts{0.0, 1.0};
  const double tol = 1e-12;
  for (const auto& e : d.edges()) {
    const Point2 q = e.a;
    const Point2 ev = e.b - e.a;
    const double denom = cross(r, ev);
    const Point2 qp = q - p;
    const double elen = norm(ev);
    if (std::abs(denom) > tol * len * elen) {
      const double t = cross(qp, ev) / denom;
      const double u = cross(qp, r) / denom;
      if (u >= -tol && u <= 1.0 + tol && t > 0.0 && t < 1.0) ts.push_back(t);
    } else if (std::abs(cross(qp, r)) <= d.eps_geom() * len) {
      // collinear: the overlap is delimited by the edge endpoints
      for (Point2 v : {e.a, e.b}) {
        const double t = dot(v - p, r) / rr;
        if (t > 0.0 && t < 1.0) ts.push_back(t);
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

Segment::Segment(Point2 a, Point2 b) : a_(a), b_(b) {
  if (!is_finite(a) || !is_finite(b)) throw ArgumentError("segment endpoints must be finite");
  if (a == b) throw ArgumentError("zero-length segment");
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
  if (vertices_.size() < 3) throw DomainError("polygon needs at least 3 vertices");
  for (const auto& v : vertices_) {
    if (!is_finite(v)) throw DomainError("polygon vertex is not finite");
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertex(i) == vertex(i + 1)) throw DomainError("polygon has repeated consecutive vertices");
  }
  if (signed_area() == 0.0) throw DomainError("polygon has zero area");
}

double Polygon::signed_area() const {
  double s = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) s += cross(vertex(i), vertex(i + 1));
  return 0.5 * s;
}

Polygon Polygon::reversed() const {
  std::vector<Point2> v(vertices_.rbegin(), vertices_.rend());
  return Polygon(std::move(v));
}

bool Polygon::encloses(Point2 p) const {
  bool inside = false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point2 a = vertex(i);
    const Point2 b = vertex(i + 1);
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

Polygon Polygon::regular(Point2 center, double radius, int n) {
  if (n < 3) throw ArgumentError("regular polygon needs n >= 3");
  if (!(radius > 0.0)) throw ArgumentError("regular polygon needs a positive radius");
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    v.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return Polygon(std::move(v));
}

Domain::Domain(Polygon outer, std::vector<Polygon> holes, std::optional<double> eps_geom)
    : outer_(outer.oriented(true)) {
  holes_.reserve(holes.size());
  for (auto& h : holes) holes_.push_back(h.oriented(false));

  require_simple(outer_, "outer");
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    const std::string name = "hole " + std::to_string(i);
    require_simple(holes_[i], name.c_str());
    for (const auto& v : holes_[i].vertices()) {
      if (!outer_.encloses(v)) throw DomainError(name + " is not strictly inside the outer loop");
    }
    if (loops_touch(outer_, holes_[i])) throw DomainError(name + " touches the outer loop");
    for (std::size_t j = 0; j < i; ++j) {
      if (loops_touch(holes_[i], holes_[j]) || holes_[i].encloses(holes_[j].vertex(0)) ||
          holes_[j].encloses(holes_[i].vertex(0))) {
        throw DomainError(name + " overlaps hole " + std::to_string(j));
      }
    }
  }

  auto add_loop = [this](const Polygon& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2 a = poly.vertex(i), b = poly.vertex(i + 1);
      edges_.push_back({a, b, 1.0 / dot(b - a, b - a)});
    }
  };
  add_loop(outer_);
  for (const auto& h : holes_) add_loop(h);

  bbox_ = {outer_.vertex(0).x, outer_.vertex(0).x, outer_.vertex(0).y, outer_.vertex(0).y};
  for (const auto& v : outer_.vertices()) {
    bbox_.xmin = std::min(bbox_.xmin, v.x);
    bbox_.xmax = std::max(bbox_.xmax, v.x);
    bbox_.ymin = std::min(bbox_.ymin, v.y);
    bbox_.ymax = std::max(bbox_.ymax, v.y);
  }
  const auto ov = outer_.vertices();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    for (std::size_t j = i + 1; j < ov.size(); ++j) diameter_ = std::max(diameter_, distance(ov[i], ov[j]));
  }

  if (eps_geom) {
    if (!(*eps_geom > 0.0) || !std::isfinite(*eps_geom)) throw DomainError("eps_geom must be positive");
    eps_geom_ = *eps_geom;
  } else {
    eps_geom_ = 1e-9 * diameter_;
  }
}

double Domain::area() const {
  double a = outer_.signed_area();
  for (const auto& h : holes_) a += h.signed_area();
  return a;
}

Domain Domain::with_punctures(std::span<const Point2> points) const {
  Domain out = *this;
  for (const Point2 p : points) {
    if (contains(*this, p) == Membership::exterior) {
      throw DomainError("puncture outside the domain closure");
    }
    const bool dup = std::any_of(out.punctures_.begin(), out.punctures_.end(),
                                 [&](Point2 q) { return distance(p, q) <= eps_geom_; });
    if (!dup) out.punctures_.push_back(p);
  }
  return out;
}

Domain Domain::disc(Point2 center, double radius, int n) {
  return Domain(Polygon::regular(center, radius, n));
}

Domain Domain::annulus(Point2 center, double outer_radius, double inner_radius, int n) {
  if (!(inner_radius < outer_radius)) throw ArgumentError("annulus needs inner < outer radius");
  return Domain(Polygon::regular(center, outer_radius, n), {Polygon::regular(center, inner_radius, n)});
}

Domain Domain::rectangle(double xmin, double ymin, double xmax, double ymax) {
  return Domain(Polygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}}));
}

Domain Domain::l_shape(double scale) {
  const double s = scale;
  return Domain(Polygon({{0, 0}, {2 * s, 0}, {2 * s, s}, {s, s}, {s, 2 * s}, {0, 2 * s}}));
}

Projection project_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point2 foot = a + t * ab;
  return {distance(p, foot), t, foot};
}

Location locate(const Domain& d, Point2 p) {
  if (!is_finite(p)) throw DomainError("point is not finite");
  bool inside = false;
  double best2 = std::numeric_limits<double>::infinity();
  for (const auto& e : d.edges()) {
    const Point2 ab = e.b - e.a;
    const Point2 ap = p - e.a;
    const double t = std::clamp(dot(ap, ab) * e.inv_len2, 0.0, 1.0);
    const Point2 r = ap - t * ab;
    best2 = std::min(best2, dot(r, r));
    if ((e.a.y > p.y) != (e.b.y > p.y)) {
      const double xc = e.a.x + (p.y - e.a.y) * ab.x / ab.y;
      if (p.x < xc) inside = !inside;
    }
  }
  for (const Point2 c : d.punctures()) {
    const Point2 r = p - c;
    best2 = std::min(best2, dot(r, r));
  }
  const double dist = std::sqrt(best2);
  if (dist <= d.eps_geom()) return {Membership::boundary, 0.0};
  return {inside ? Membership::interior : Membership::exterior, dist};
}

Membership contains(const Domain& d, Point2 p) { return locate(d, p).membership; }

double dist_to_boundary(const Domain& d, Point2 p) {
  const Location loc = locate(d, p);
  if (loc.membership == Membership::exterior) throw DomainError("dist_to_boundary: point is exterior");
  return loc.boundary_distance;
}

DbarResult dbar(const Domain& d, Point2 p, Point2 q) {
  const double dp = dist_to_boundary(d, p);
  const double dq = dist_to_boundary(d, q);
  const double direct = distance(p, q);
  const double via = dp + dq;
  if (direct < via) {
    if (direct == 0.0 || segment_in_closure(d, Segment(p, q))) return {direct, Route::direct};
  }
  return {via, Route::via_boundary};
}

Point2 nearest_boundary_point(const Domain& d, Point2 p) {
  if (contains(d, p) == Membership::exterior) throw DomainError("nearest_boundary_point: point is exterior");
  const double tie = 1e-12 * d.diameter();
  double best = std::numeric_limits<double>::infinity();
  Point2 foot = p;
  for (const auto& e : d.edges()) {
    const Projection pr = project_to_segment(p, e.a, e.b);
    if (pr.distance < best - tie) {
      best = pr.distance;
      foot = pr.foot;
    }
  }
  for (const Point2 c : d.punctures()) {
    const double dc = distance(p, c);
    if (dc < best - tie) {
      best = dc;
      foot = c;
    }
  }
  return foot;
}

bool segment_in_closure(const Domain& d, const Segment& s) {
  const auto ts = breakpoints(d, s);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] <= 0.0) continue;
    if (classify_loops(d, s.at(0.5 * (ts[i] + ts[i + 1]))) == Membership::exterior) return false;
  }
  return true;
}

double segment_length_inside(const Domain& d, const Segment& s) {
  const auto ts = breakpoints(d, s);
  const double len = s.length();
  double inside = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double dt = ts[i + 1] - ts[i];
    if (dt <= 0.0) continue;
    if (classify_loops(d, s.at(0.5 * (ts[i] + ts[i + 1]))) == Membership::interior) inside += dt * len;
  }
  return inside;
}

const Polygon& external_boundary(const Domain& d) { return d.outer(); }

}  // namespace flatconn
