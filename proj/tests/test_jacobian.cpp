#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "flatconn/errors.hpp"
#include "flatconn/jacobian.hpp"

using namespace flatconn;

namespace {

const auto square = std::make_shared<const Domain>(Domain::rectangle(-1.0, -1.0, 1.0, 1.0));

WindingChart chart_of(const MapFamily& f, std::size_t n) {
  return winding_per_plaquette(sample(f, GridSpec{square->bbox(), n, n}, *square));
}

}  // namespace

TEST_CASE("evaluating built-in maps") {
  const auto v = make_multi_vortex({{{0.0, 0.0}, 1}});
  Point2 u = eval_family(v, {1.0, 0.0});
  CHECK(u.x == doctest::Approx(1.0));
  CHECK(u.y == doctest::Approx(0.0));
  u = eval_family(v, {0.0, 1.0});
  CHECK(u.x == doctest::Approx(0.0));
  CHECK(u.y == doctest::Approx(1.0));
  CHECK_THROWS_AS(eval_family(v, {0.0, 0.0}), SingularityError);

  const auto dip = make_dipole({-0.1, 0.0}, {0.1, 0.0});
  u = eval_family(dip, {10.0, 0.0});
  CHECK(u.x == doctest::Approx(1.0));
  CHECK(std::abs(u.y) < 1e-9);

  // Independent evaluation: product of (z - a)^k / |z - a|^k.
  const std::vector<Vortex> vs{{{0.3, -0.2}, 2}, {{-0.5, 0.4}, -1}};
  const auto f = make_multi_vortex(vs, 0.7);
  const std::complex<double> z{0.11, 0.62};
  std::complex<double> w = std::polar(1.0, 0.7);
  for (const auto& vx : vs) {
    const std::complex<double> q = z - std::complex<double>{vx.center.x, vx.center.y};
    w *= std::pow(q / std::abs(q), vx.degree);
  }
  u = eval_family(f, {z.real(), z.imag()});
  CHECK(u.x == doctest::Approx(w.real()).epsilon(1e-13));
  CHECK(u.y == doctest::Approx(w.imag()).epsilon(1e-13));
}

TEST_CASE("products merge vortices") {
  const auto a = make_multi_vortex({{{0.2, 0.0}, 1}, {{-0.2, 0.0}, 1}});
  const auto b = make_dipole({0.2, 0.0}, {0.5, 0.5});
  const auto vs = vortices_of(make_product({a, b}));
  int deg_at_p = 0, total = 0;
  for (const auto& v : vs) {
    total += v.degree;
    if (v.center == Point2{0.2, 0.0}) deg_at_p = v.degree;
  }
  CHECK(deg_at_p == 2);
  CHECK(total == 2);
  CHECK(vs.size() == 3);

  const MapFamily custom{CustomPhase{[](Point2 p) { return Point2{std::cos(p.x), std::sin(p.x)}; }, {}}, 0.0};
  CHECK_THROWS_AS(vortices_of(custom), UnsupportedError);
}

TEST_CASE("a degree-one vortex occupies one plaquette") {
  const auto f = make_multi_vortex({{{0.013, -0.021}, 1}});
  const auto chart = chart_of(f, 64);
  REQUIRE(chart.cells.size() == 1);
  CHECK(chart.cells[0].winding == 1);
  CHECK(chart.total == 1);
  const double h = 2.0 / 63;
  CHECK(std::abs(chart.cells[0].center.x - 0.013) <= h / 2);
  CHECK(std::abs(chart.cells[0].center.y + 0.021) <= h / 2);
}

TEST_CASE("higher degree and dipoles") {
  const auto neg2 = chart_of(make_multi_vortex({{{0.1, 0.2}, -2}}), 64);
  CHECK(neg2.total == -2);
  for (const auto& c : neg2.cells) CHECK(distance(c.center, {0.1, 0.2}) < 3 * 2.0 / 63);

  const auto dip = chart_of(make_dipole({-0.3, 0.1}, {0.35, -0.2}), 128);
  REQUIRE(dip.cells.size() == 2);
  CHECK(dip.total == 0);
  const auto atoms = to_signed_atoms(atoms_from_windings(dip, square));
  REQUIRE(atoms.size() == 2);
  for (const auto& a : atoms) {
    const Point2 want = a.multiplicity > 0 ? Point2{-0.3, 0.1} : Point2{0.35, -0.2};
    CHECK(distance(a.location, want) < 2.0 / 127);
  }
  CHECK(atoms_from_windings(dip, square).measure_scale() == std::numbers::pi);
}

TEST_CASE("analytic atoms") {
  const auto f = make_multi_vortex({{{0.1, 0.2}, 2}, {{3.0, 0.0}, 1}, {{-0.4, -0.4}, -1}});
  const auto t = analytic_jacobian_atoms(f, square);
  CHECK(t.measure_scale() == std::numbers::pi);
  const auto atoms = to_signed_atoms(t);
  int total = 0;
  for (const auto& a : atoms) total += a.multiplicity;
  CHECK(total == 1);
  CHECK(atoms.size() == 2);
}

TEST_CASE("degree along circles") {
  const auto f = make_multi_vortex({{{0.0, 0.0}, 1}, {{0.5, 0.0}, -2}});
  CHECK(degree_on_circle(f, {0.0, 0.0}, 0.25, 512) == 1);
  CHECK(degree_on_circle(f, {0.0, 0.0}, 1.0, 512) == -1);
  CHECK(degree_on_circle(f, {0.5, 0.0}, 0.1, 512) == -2);
  CHECK(degree_on_circle(f, {-0.5, 0.5}, 0.2, 512) == 0);
  CHECK_THROWS_AS(degree_on_circle(f, {0.0, 0.0}, 0.5, 512), ArgumentError);
  CHECK(degree_on_circle(make_multi_vortex({{{0.0, 0.0}, 1}}), {0.0, 0.0}, 0.5, 256) == 1);
  const auto dip = make_dipole({-0.2, 0.0}, {0.2, 0.1});
  CHECK(degree_on_circle(dip, {0.0, 0.0}, 0.6, 256) == 0);
  CHECK(degree_on_circle(dip, {-0.2, 0.0}, 0.1, 256) == 1);
}

TEST_CASE("sampling") {
  const auto f = make_multi_vortex({{{0.0, 0.0}, 1}});
  CHECK_THROWS_AS(sample(f, GridSpec{square->bbox(), 4, 4}, *square), ArgumentError);
  // Node on the vortex center is moved off it.
  const auto field = sample(f, GridSpec{square->bbox(), 9, 9}, *square);
  CHECK(field.values.size() == 81);
  const auto chart = winding_per_plaquette(field);
  CHECK(chart.total == 1);
}
