#pragma once

// Polygonal planar domains with holes: membership, boundary distance, the
// boundary-aware pole distance dbar, and segment clipping.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace flatconn {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Oriented segment a -> b with a != b.
class Segment {
 public:
  Segment(Point2 a, Point2 b);

  Point2 a() const { return a_; }
  Point2 b() const { return b_; }
  double length() const { return distance(a_, b_); }
  Point2 at(double t) const { return a_ + t * (b_ - a_); }

 private:
  Point2 a_;
  Point2 b_;
};

// Simple closed loop; the closing edge back to the first vertex is implicit.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Point2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  double signed_area() const;
  bool is_ccw() const { return signed_area() > 0.0; }
  Polygon reversed() const;
  Polygon oriented(bool ccw) const { return is_ccw() == ccw ? *this : reversed(); }

  // Even-odd test against this loop alone; points on the loop are unspecified.
  bool encloses(Point2 p) const;

  // Regular n-gon inscribed in the circle of the given radius, first vertex at angle 0.
  static Polygon regular(Point2 center, double radius, int n);

 private:
  std::vector<Point2> vertices_;
};

enum class Membership { interior, boundary, exterior };
enum class Route { direct, via_boundary };

struct DbarResult {
  double value;
  Route route;
};

struct BoundingBox {
  double xmin, xmax, ymin, ymax;
};

// Outer loop (CCW) minus hole loops (CW), optionally punctured at finitely many
// points. Punctures are boundary points of the open set: they carry no area and
// do not affect segment clipping, but they count as boundary for membership,
// boundary distance and nearest-boundary projection.
class Domain {
 public:
  struct Edge {
    Point2 a;
    Point2 b;
    double inv_len2 = 0.0;
  };

  explicit Domain(Polygon outer, std::vector<Polygon> holes = {},
                  std::optional<double> eps_geom = std::nullopt);

  const Polygon& outer() const { return outer_; }
  std::span<const Polygon> holes() const { return holes_; }
  std::span<const Point2> punctures() const { return punctures_; }
  std::span<const Edge> edges() const { return edges_; }
  double eps_geom() const { return eps_geom_; }
  double diameter() const { return diameter_; }
  BoundingBox bbox() const { return bbox_; }
  double area() const;

  // Copy of this domain with the given points added to the puncture set
  // (deduplicated within eps_geom). Points must lie in the closure.
  Domain with_punctures(std::span<const Point2> points) const;

  // Disc of given radius approximated by a regular n-gon.
  static Domain disc(Point2 center, double radius, int n = 720);
  static Domain annulus(Point2 center, double outer_radius, double inner_radius, int n = 720);
  static Domain rectangle(double xmin, double ymin, double xmax, double ymax);
  // [0,2]^2 minus [1,2]^2, scaled.
  static Domain l_shape(double scale = 1.0);

 private:
  Polygon outer_;
  std::vector<Polygon> holes_;
  std::vector<Point2> punctures_;
  std::vector<Edge> edges_;
  double eps_geom_ = 0.0;
  double diameter_ = 0.0;
  BoundingBox bbox_{};
};

// Membership and boundary distance computed in a single pass over the edges.
struct Location {
  Membership membership;
  double boundary_distance;
};

Location locate(const Domain& d, Point2 p);
Membership contains(const Domain& d, Point2 p);
double dist_to_boundary(const Domain& d, Point2 p);
DbarResult dbar(const Domain& d, Point2 p, Point2 q);
Point2 nearest_boundary_point(const Domain& d, Point2 p);
bool segment_in_closure(const Domain& d, const Segment& s);
double segment_length_inside(const Domain& d, const Segment& s);
const Polygon& external_boundary(const Domain& d);

// Distance from p to the closed segment [a,b] and the clamped parameter of the foot.
struct Projection {
  double distance;
  double t;
  Point2 foot;
};
Projection project_to_segment(Point2 p, Point2 a, Point2 b);

}  // namespace flatconn
