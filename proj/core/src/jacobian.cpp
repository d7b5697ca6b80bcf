#include "flatconn/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "flatconn/errors.hpp"
#include "flatconn/parallel.hpp"

namespace flatconn {

namespace {

using cplx = std::complex<double>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Increment of the angle from u to v, wrapped to (-pi, pi].
double wrapped_step(Point2 u, Point2 v) {
  const double s = std::atan2(cross(u, v), dot(u, v));
  return s == -std::numbers::pi ? std::numbers::pi : s;
}

cplx unit_power(Point2 p, Point2 a, int degree) {
  const cplx z{p.x - a.x, p.y - a.y};
  cplx w = z / std::abs(z);
  if (degree < 0) w = std::conj(w);
  cplx r{1.0, 0.0};
  for (int k = 0; k < std::abs(degree); ++k) r *= w;
  return r;
}

}  // namespace

MapFamily make_multi_vortex(std::vector<Vortex> vortices, double phase_offset) {
  for (std::size_t i = 0; i < vortices.size(); ++i) {
    if (!is_finite(vortices[i].center)) throw ArgumentError("vortex center is not finite");
    if (vortices[i].degree == 0) throw ArgumentError("vortex " + std::to_string(i) + " has degree 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (vortices[i].center == vortices[j].center) throw ArgumentError("vortex centers must be distinct");
    }
  }
  return {MultiVortex{std::move(vortices)}, phase_offset};
}

MapFamily make_dipole(Point2 p, Point2 n, double phase_offset) {
  if (!is_finite(p) || !is_finite(n)) throw ArgumentError("dipole poles must be finite");
  if (p == n) throw ArgumentError("dipole poles must differ");
  return {DipoleMap{p, n}, phase_offset};
}

MapFamily make_product(const std::vector<MapFamily>& factors) {
  std::vector<Vortex> merged;
  double offset = 0.0;
  for (const auto& f : factors) {
    offset += f.phase_offset;
    for (const auto& v : vortices_of(f)) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const Vortex& w) { return w.center == v.center; });
      if (it == merged.end()) {
        merged.push_back(v);
      } else {
        it->degree += v.degree;
      }
    }
  }
  std::erase_if(merged, [](const Vortex& v) { return v.degree == 0; });
  return make_multi_vortex(std::move(merged), offset);
}

std::vector<Vortex> vortices_of(const MapFamily& f) {
  return std::visit(overloaded{
                        [](const MultiVortex& m) { return m.vortices; },
                        [](const DipoleMap& dm) { return std::vector<Vortex>{{dm.p, 1}, {dm.n, -1}}; },
                        [](const CustomPhase&) -> std::vector<Vortex> {
                          throw UnsupportedError("custom maps have no built-in defect list");
                        },
                    },
                    f.kind);
}

std::vector<Point2> singular_points(const MapFamily& f) {
  if (const auto* c = std::get_if<CustomPhase>(&f.kind)) return c->singular;
  std::vector<Point2> out;
  for (const auto& v : vortices_of(f)) out.push_back(v.center);
  return out;
}

Point2 eval_family(const MapFamily& f, Point2 p, double tol) {
  for (const Point2 s : singular_points(f)) {
    if (distance(p, s) <= tol) {
      throw SingularityError("map evaluated at singular point (" + std::to_string(s.x) + ", " +
                             std::to_string(s.y) + ")");
    }
  }
  cplx value{1.0, 0.0};
  if (const auto* c = std::get_if<CustomPhase>(&f.kind)) {
    const Point2 q = c->map(p);
    const double r = norm(q);
    if (!(r > 0.0) || !std::isfinite(r)) throw SingularityError("custom map has no direction at this point");
    value = {q.x / r, q.y / r};
  } else {
    for (const auto& v : vortices_of(f)) value *= unit_power(p, v.center, v.degree);
  }
  if (f.phase_offset != 0.0) value *= std::polar(1.0, f.phase_offset);
  const double r = std::abs(value);
  return {value.real() / r, value.imag() / r};
}

S1Field sample(const MapFamily& f, const GridSpec& grid, const Domain& d) {
  if (grid.nx < 8 || grid.ny < 8) throw ArgumentError("sampling grid must be at least 8 x 8");
  if (!(grid.box.xmax > grid.box.xmin) || !(grid.box.ymax > grid.box.ymin)) {
    throw ArgumentError("sampling box is empty");
  }
  const std::size_t nx = grid.nx;
  const std::size_t ny = grid.ny;
  const double hx = grid.hx();
  const double hy = grid.hy();
  const double hit = 1e-9 * std::max(hx, hy);
  const auto singular = singular_points(f);

  S1Field field{grid, std::vector<Point2>(nx * ny), std::vector<char>(nx * ny, 0),
                std::vector<char>((nx - 1) * (ny - 1), 0)};
  parallel_for(ny, [&](std::size_t j) {
    for (std::size_t i = 0; i < nx; ++i) {
      Point2 p = grid.node(i, j);
      if (contains(d, p) == Membership::exterior) continue;
      field.mask[j * nx + i] = 1;
      for (const Point2 s : singular) {
        if (distance(p, s) <= hit) {
          p = p + Point2{0.5 * hx, 0.5 * hy};
          break;
        }
      }
      field.values[j * nx + i] = eval_family(f, p, 0.0);
    }
  });

  const double half_diagonal = 0.5 * std::hypot(hx, hy);
  parallel_for(ny - 1, [&](std::size_t j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const bool corners = field.mask[j * nx + i] && field.mask[j * nx + i + 1] &&
                           field.mask[(j + 1) * nx + i] && field.mask[(j + 1) * nx + i + 1];
      if (!corners) continue;
      const Location loc = locate(d, grid.node(i, j) + Point2{0.5 * hx, 0.5 * hy});
      field.cell_mask[j * (nx - 1) + i] =
          loc.membership == Membership::interior && loc.boundary_distance > half_diagonal;
    }
  });
  return field;
}

WindingChart winding_per_plaquette(const S1Field& field) {
  const GridSpec& g = field.grid;
  const std::size_t nx = g.nx;
  const std::size_t rows = g.ny - 1;
  const double hx = g.hx();
  const double hy = g.hy();
  const double reliable = std::numbers::pi - 0.1;

  std::vector<std::vector<CellWinding>> found(rows), flagged(rows);
  std::vector<std::size_t> counted(rows, 0);
  parallel_for(rows, [&](std::size_t j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      if (!field.cell_mask[j * (nx - 1) + i]) continue;
      ++counted[j];
      const Point2 c[4] = {field.values[j * nx + i], field.values[j * nx + i + 1],
                           field.values[(j + 1) * nx + i + 1], field.values[(j + 1) * nx + i]};
      double sum = 0.0;
      bool shaky = false;
      for (int e = 0; e < 4; ++e) {
        const double step = wrapped_step(c[e], c[(e + 1) % 4]);
        shaky = shaky || std::abs(step) > reliable;
        sum += step;
      }
      const int w = static_cast<int>(std::lround(sum / (2.0 * std::numbers::pi)));
      const CellWinding cell{i, j, g.node(i, j) + Point2{0.5 * hx, 0.5 * hy}, w};
      if (w != 0) found[j].push_back(cell);
      if (shaky) flagged[j].push_back(cell);
    }
  });

  WindingChart chart;
  chart.grid = g;
  for (std::size_t j = 0; j < rows; ++j) {
    chart.plaquettes += counted[j];
    for (const auto& c : found[j]) {
      chart.cells.push_back(c);
      chart.total += c.winding;
    }
    chart.unreliable.insert(chart.unreliable.end(), flagged[j].begin(), flagged[j].end());
  }
  return chart;
}

int degree_on_circle(const MapFamily& f, Point2 center, double radius, std::size_t n_samples) {
  if (!(radius > 0.0) || n_samples < 3) throw ArgumentError("circle needs a positive radius and at least 3 samples");
  const double spacing = 2.0 * std::numbers::pi * radius / static_cast<double>(n_samples);
  for (const Point2 s : singular_points(f)) {
    if (std::abs(distance(s, center) - radius) < spacing) {
      throw ArgumentError("singular point lies within one sample spacing of the circle");
    }
  }
  auto at = [&](std::size_t k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_samples);
    return eval_family(f, {center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  };
  double sum = 0.0;
  Point2 prev = at(0);
  const Point2 first = prev;
  for (std::size_t k = 1; k <= n_samples; ++k) {
    const Point2 cur = k == n_samples ? first : at(k);
    sum += wrapped_step(prev, cur);
    prev = cur;
  }
  const double turns = sum / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.1) {
    throw ResolutionError("circle winding " + std::to_string(turns) + " is not close to an integer");
  }
  return static_cast<int>(rounded);
}

AtomicDistribution atoms_from_windings(const WindingChart& chart, DomainPtr d) {
  SignedAtomList atoms;
  for (const auto& c : chart.cells) atoms.push_back({c.center, c.winding});
  return from_signed_atoms(atoms, std::move(d)).with_measure_scale(std::numbers::pi);
}

AtomicDistribution analytic_jacobian_atoms(const MapFamily& f, DomainPtr d) {
  if (std::holds_alternative<CustomPhase>(f.kind)) {
    throw UnsupportedError("analytic Jacobian atoms need a built-in map family");
  }
  if (!d) throw ArgumentError("analytic_jacobian_atoms needs a domain");
  SignedAtomList atoms;
  for (const auto& v : vortices_of(f)) {
    if (contains(*d, v.center) != Membership::exterior) atoms.push_back({v.center, v.degree});
  }
  return from_signed_atoms(atoms, std::move(d)).with_measure_scale(std::numbers::pi);
}

}  // namespace flatconn
