#pragma once

// S1-valued maps, their grid samples, and the integer defects read off them.

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "flatconn/currents.hpp"

namespace flatconn {

struct Vortex {
  Point2 center;
  int degree = 1;
};

// prod_k ((z - a_k) / |z - a_k|)^{d_k}; centers distinct, degrees nonzero.
struct MultiVortex {
  std::vector<Vortex> vortices;
};

// exp(i(theta_p - theta_n)): degree +1 at p and -1 at n.
struct DipoleMap {
  Point2 p;
  Point2 n;
};

// Host-supplied map. Values are normalized on evaluation; `singular` lists the
// points where the map is undefined.
struct CustomPhase {
  std::function<Point2(Point2)> map;
  std::vector<Point2> singular;
};

struct MapFamily {
  std::variant<MultiVortex, DipoleMap, CustomPhase> kind;
  double phase_offset = 0.0;  // constant gauge rotation
};

MapFamily make_multi_vortex(std::vector<Vortex> vortices, double phase_offset = 0.0);
MapFamily make_dipole(Point2 p, Point2 n, double phase_offset = 0.0);
// Pointwise product of built-in families; coincident centers are merged.
MapFamily make_product(const std::vector<MapFamily>& factors);

// Signed defects of a built-in family; UnsupportedError for custom maps.
std::vector<Vortex> vortices_of(const MapFamily& f);
std::vector<Point2> singular_points(const MapFamily& f);

// Unit vector u(p). SingularityError within `tol` of a singular point.
Point2 eval_family(const MapFamily& f, Point2 p, double tol = 1e-12);

// Nodes (xmin + i*hx, ymin + j*hy), i < nx, j < ny.
struct GridSpec {
  BoundingBox box{};
  std::size_t nx = 0;
  std::size_t ny = 0;

  double hx() const { return (box.xmax - box.xmin) / static_cast<double>(nx - 1); }
  double hy() const { return (box.ymax - box.ymin) / static_cast<double>(ny - 1); }
  Point2 node(std::size_t i, std::size_t j) const {
    return {box.xmin + static_cast<double>(i) * hx(), box.ymin + static_cast<double>(j) * hy()};
  }
};

// Node values row-major with j outermost; mask marks nodes in the closure.
// cell_mask marks plaquettes whose corners are all in the closure and whose
// square stays off the boundary (center deeper than half a diagonal).
struct S1Field {
  GridSpec grid;
  std::vector<Point2> values;
  std::vector<char> mask;
  std::vector<char> cell_mask;
};

// Grids must be at least 8 x 8. Nodes that land on a singular point are
// sampled half a cell up and to the right.
S1Field sample(const MapFamily& f, const GridSpec& grid, const Domain& d);

struct CellWinding {
  std::size_t i = 0;  // plaquette [i, i+1] x [j, j+1]
  std::size_t j = 0;
  Point2 center;
  int winding = 0;
};

struct WindingChart {
  GridSpec grid;
  std::vector<CellWinding> cells;        // nonzero windings only
  std::vector<CellWinding> unreliable;   // some edge increment within 0.1 of pi
  std::size_t plaquettes = 0;            // plaquettes examined
  int total = 0;
};

WindingChart winding_per_plaquette(const S1Field& field);

// Winding of f along the circle. ResolutionError if the sum is not within 0.1
// of an integer; ArgumentError if a singular point is closer to the circle
// than one sample spacing.
int degree_on_circle(const MapFamily& f, Point2 center, double radius, std::size_t n_samples);

// Jacobians carry measure_scale pi: Det(grad u) = pi * sum(delta_x - delta_y).
AtomicDistribution atoms_from_windings(const WindingChart& chart, DomainPtr d);
AtomicDistribution analytic_jacobian_atoms(const MapFamily& f, DomainPtr d);

}  // namespace flatconn
