#include "io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "flatconn/errors.hpp"

namespace flatconn::io {

namespace {

[[noreturn]] void schema_fail(std::string_view source, const std::string& what) {
  throw SchemaError(std::string(source) + ": " + what);
}

double number(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_number()) schema_fail(source, "field '" + field + "': expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_fail(source, "field '" + field + "': number is not finite");
  return v;
}

Point2 point(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_array() || j.size() != 2) schema_fail(source, "field '" + field + "': expected [x, y]");
  return {number(j[0], source, field + "[0]"), number(j[1], source, field + "[1]")};
}

const json& member(const json& j, const char* key, std::string_view source, const std::string& where) {
  if (!j.is_object()) schema_fail(source, "field '" + where + "': expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_fail(source, "missing field '" + (where.empty() ? "" : where + ".") + key + "'");
  return *it;
}

Polygon loop(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_array()) schema_fail(source, "field '" + field + "': expected a list of [x, y] vertices");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point(j[i], source, field + "[" + std::to_string(i) + "]"));
  try {
    return Polygon(std::move(pts));
  } catch (const std::exception& e) {
    schema_fail(source, "field '" + field + "': " + e.what());
  }
}

int integer(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_number_integer()) schema_fail(source, "field '" + field + "': expected an integer");
  return j.get<int>();
}

}  // namespace

Domain parse_domain(const json& j, std::string_view source) {
  Polygon outer = loop(member(j, "outer", source, ""), source, "outer");
  std::vector<Polygon> holes;
  if (const auto it = j.find("holes"); it != j.end()) {
    if (!it->is_array()) schema_fail(source, "field 'holes': expected a list of loops");
    for (std::size_t i = 0; i < it->size(); ++i) holes.push_back(loop((*it)[i], source, "holes[" + std::to_string(i) + "]"));
  }
  std::optional<double> eps;
  if (const auto it = j.find("eps_geom"); it != j.end() && !it->is_null()) {
    eps = number(*it, source, "eps_geom");
    if (!(*eps > 0.0)) schema_fail(source, "field 'eps_geom': must be positive");
  }
  try {
    return Domain(std::move(outer), std::move(holes), eps);
  } catch (const DomainError& e) {
    schema_fail(source, e.what());
  }
}

MapFamily parse_map(const json& j, std::string_view source) {
  const json& fam = member(j, "family", source, "");
  if (!fam.is_string()) schema_fail(source, "field 'family': expected a string");
  const std::string family = fam.get<std::string>();
  double offset = 0.0;
  if (const auto it = j.find("phase_offset"); it != j.end()) offset = number(*it, source, "phase_offset");
  try {
    if (family == "multi_vortex") {
      const json& vs = member(j, "vortices", source, "");
      if (!vs.is_array()) schema_fail(source, "field 'vortices': expected a list");
      std::vector<Vortex> vortices;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string f = "vortices[" + std::to_string(i) + "]";
        vortices.push_back({point(member(vs[i], "center", source, f), source, f + ".center"),
                            integer(member(vs[i], "degree", source, f), source, f + ".degree")});
      }
      return make_multi_vortex(std::move(vortices), offset);
    }
    if (family == "dipole") {
      return make_dipole(point(member(j, "p", source, ""), source, "p"), point(member(j, "n", source, ""), source, "n"),
                         offset);
    }
    if (family == "product") {
      const json& fs = member(j, "factors", source, "");
      if (!fs.is_array()) schema_fail(source, "field 'factors': expected a list of maps");
      std::vector<MapFamily> factors;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        factors.push_back(parse_map(fs[i], std::string(source) + " factors[" + std::to_string(i) + "]"));
      }
      MapFamily m = make_product(factors);
      m.phase_offset += offset;
      return m;
    }
  } catch (const ArgumentError& e) {
    schema_fail(source, e.what());
  }
  schema_fail(source, "field 'family': unknown family '" + family + "' (multi_vortex, dipole, product)");
}

AtomicDistribution parse_pairs(const json& j, DomainPtr d, std::string_view source) {
  const json& ps = member(j, "pairs", source, "");
  if (!ps.is_array()) schema_fail(source, "field 'pairs': expected a list");
  std::vector<PolePair> pairs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string f = "pairs[" + std::to_string(i) + "]";
    pairs.push_back({point(member(ps[i], "x", source, f), source, f + ".x"),
                     point(member(ps[i], "y", source, f), source, f + ".y")});
  }
  try {
    return AtomicDistribution(std::move(d), std::move(pairs));
  } catch (const ArgumentError& e) {
    schema_fail(source, e.what());
  }
}

SignedAtomList parse_atoms_csv(std::string_view text, std::string_view source) {
  SignedAtomList atoms;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) { schema_fail(source, "line " + std::to_string(lineno) + ": " + what); };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (atoms.empty() && line.substr(first).starts_with("x,")) continue;  // header

    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) {
      const auto b = f.find_first_not_of(" \t");
      const auto e = f.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
    }
    if (fields.size() != 3) fail("expected 'x,y,multiplicity', got " + std::to_string(fields.size()) + " fields");
    double xy[2];
    for (int k = 0; k < 2; ++k) {
      const auto& f = fields[k];
      const auto r = std::from_chars(f.data(), f.data() + f.size(), xy[k]);
      if (r.ec != std::errc{} || r.ptr != f.data() + f.size() || !std::isfinite(xy[k])) {
        fail(std::string("field '") + (k == 0 ? "x" : "y") + "' is not a finite number");
      }
    }
    int m = 0;
    const auto& f = fields[2];
    const auto r = std::from_chars(f.data(), f.data() + f.size(), m);
    if (r.ec != std::errc{} || r.ptr != f.data() + f.size() || m == 0) {
      fail("field 'multiplicity' must be a nonzero integer");
    }
    atoms.push_back({{xy[0], xy[1]}, m});
  }
  return atoms;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

Domain load_domain(const std::string& path) { return parse_domain(read_json(path), path); }
MapFamily load_map(const std::string& path) { return parse_map(read_json(path), path); }

AtomicDistribution load_distribution(const std::string& path, DomainPtr d) {
  if (std::filesystem::path(path).extension() == ".json") return parse_pairs(read_json(path), std::move(d), path);
  try {
    return from_signed_atoms(parse_atoms_csv(read_file(path), path), std::move(d));
  } catch (const ArgumentError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

json to_json(Point2 p) { return json::array({p.x, p.y}); }

json to_json(const Domain& d) {
  auto loop_json = [](const Polygon& poly) {
    json a = json::array();
    for (const Point2 p : poly.vertices()) a.push_back(to_json(p));
    return a;
  };
  json holes = json::array();
  for (const auto& h : d.holes()) holes.push_back(loop_json(h));
  return {{"outer", loop_json(d.outer())}, {"holes", holes}, {"eps_geom", d.eps_geom()}};
}

json to_json(const AtomicDistribution& t) {
  json pairs = json::array();
  for (const auto& pp : t.pairs()) pairs.push_back({{"x", to_json(pp.x)}, {"y", to_json(pp.y)}});
  json atoms = json::array();
  for (const auto& a : to_signed_atoms(t)) atoms.push_back({{"p", to_json(a.location)}, {"multiplicity", a.multiplicity}});
  return {{"pairs", pairs},
          {"atoms", atoms},
          {"measure_scale", t.measure_scale()},
          {"satisfies_P", t.satisfies_P()},
          {"satisfies_Pf", t.satisfies_Pf()}};
}

json to_json(const StructureReport& r) {
  return {{"a", to_string(r.a)}, {"b", to_string(r.b)}, {"e", to_string(r.e)}, {"f", to_string(r.f)},
          {"g", to_string(r.g)}, {"h", to_string(r.h)}, {"degenerate", r.degenerate}, {"notes", r.notes}};
}

json to_json(const Decomposition& dec) {
  json R = json::array();
  for (const auto& a : dec.R) R.push_back({{"p", to_json(a.location)}, {"sigma", a.multiplicity}});
  json S = json::array();
  for (const auto& s : dec.S) S.push_back({{"a", to_json(s.a())}, {"b", to_json(s.b())}});
  return {{"value", dec.value}, {"beta", dec.kind.beta}, {"R", R}, {"S", S}};
}

json to_json(const DualityReport& r) {
  return {{"gap", r.gap},
          {"lipschitz_pairs", r.lipschitz_pairs},
          {"lipschitz_excess", r.lipschitz_excess},
          {"max_abs", r.max_abs},
          {"boundary_max", r.boundary_max},
          {"activity_residual", r.activity_residual},
          {"gap_ok", r.gap_ok},
          {"lipschitz_ok", r.lipschitz_ok},
          {"range_ok", r.range_ok},
          {"boundary_ok", r.boundary_ok},
          {"activity_ok", r.activity_ok},
          {"passed", r.passed()}};
}

json to_json(const DualCertificate& c) {
  auto points = [](const std::vector<Point2>& ps) {
    json a = json::array();
    for (const Point2 p : ps) a.push_back(to_json(p));
    return a;
  };
  json dipoles = json::array();
  for (std::size_t k = 0; k < c.dipoles.size(); ++k) {
    dipoles.push_back({{"x", to_json(c.dipoles[k].x)}, {"y", to_json(c.dipoles[k].y)}, {"value_at_y", c.pole_values[k]}});
  }
  return {{"pplus", points(c.pplus)}, {"pminus", points(c.pminus)},     {"dipoles", dipoles},
          {"iterations_used", c.iterations_used}, {"converged", c.converged}, {"gap", c.gap},
          {"failed", c.failed}};
}

json to_json(const AreaReport& r) {
  return {{"dirichlet_area", r.dirichlet_area},
          {"singular_term", r.singular_term},
          {"upper_bound", r.upper_bound},
          {"quadrature",
           {{"rule", r.quadrature.rule},
            {"triangles", r.quadrature.triangles},
            {"cells", r.quadrature.cells},
            {"evaluations", r.quadrature.evaluations},
            {"estimated_error", r.quadrature.estimated_error}}}};
}

json to_json(const MapFamily& f) {
  if (std::holds_alternative<CustomPhase>(f.kind)) return {{"family", "custom"}};
  if (const auto* dm = std::get_if<DipoleMap>(&f.kind)) {
    return {{"family", "dipole"}, {"p", to_json(dm->p)}, {"n", to_json(dm->n)}, {"phase_offset", f.phase_offset}};
  }
  json vs = json::array();
  for (const auto& v : vortices_of(f)) vs.push_back({{"center", to_json(v.center)}, {"degree", v.degree}});
  return {{"family", "multi_vortex"}, {"vortices", vs}, {"phase_offset", f.phase_offset}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string grid_csv(const ScalarGrid& g) {
  std::string out = "nx,ny,xmin,xmax,ymin,ymax\n";
  out += std::to_string(g.nx) + "," + std::to_string(g.ny) + "," + format_number(g.box.xmin) + "," +
         format_number(g.box.xmax) + "," + format_number(g.box.ymin) + "," + format_number(g.box.ymax) + "\n";
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (i) out += ',';
      out += format_number(g.values[j * g.nx + i]);
    }
    out += '\n';
  }
  return out;
}

std::string chart_csv(const WindingChart& c) {
  std::string out = "i,j,x,y,winding\n";
  for (const auto& cell : c.cells) {
    out += std::to_string(cell.i) + "," + std::to_string(cell.j) + "," + format_number(cell.center.x) + "," +
           format_number(cell.center.y) + "," + std::to_string(cell.winding) + "\n";
  }
  return out;
}

std::string atoms_csv(const SignedAtomList& atoms) {
  std::string out = "x,y,multiplicity\n";
  for (const auto& a : atoms) {
    out += format_number(a.location.x) + "," + format_number(a.location.y) + "," + std::to_string(a.multiplicity) + "\n";
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) throw std::runtime_error(path + ": write failed");
  }
  fs::rename(tmp, target);
}

}  // namespace flatconn::io
