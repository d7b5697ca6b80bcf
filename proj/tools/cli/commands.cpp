#include "commands.hpp"

#include <charconv>
#include <ostream>

#include <CLI11.hpp>

#include "flatconn/errors.hpp"
#include "io.hpp"
#include "selftest/acceptance.hpp"

namespace flatconn::cli {

namespace {

using io::json;

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw SchemaError(std::string("missing required option ") + flag);
}

DomainPtr domain_of(const Options& o) {
  require(o.domain, "--domain");
  return std::make_shared<const Domain>(io::load_domain(o.domain));
}

void emit(const Options& o, const json& doc, std::ostream& out) {
  const std::string text = io::dump(doc);
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_file_atomic(o.out, text);
  }
}

json warnings_of(const WindingChart& chart) {
  json w = json::array();
  for (const auto& c : chart.unreliable) {
    w.push_back("plaquette (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                ") has a phase increment within 0.1 of pi");
  }
  return w;
}

}  // namespace

void parse_grid(const std::string& text, Options& o) {
  const auto x = text.find_first_of("xX");
  auto parse = [&](std::string_view s, std::size_t& v) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw SchemaError("--grid expects NxM, got '" + text + "'");
  };
  if (x == std::string::npos) throw SchemaError("--grid expects NxM, got '" + text + "'");
  parse(std::string_view(text).substr(0, x), o.nx);
  parse(std::string_view(text).substr(x + 1), o.ny);
}

int run_jacobian(const Options& o, std::ostream& out) {
  const DomainPtr d = domain_of(o);
  require(o.map, "--map");
  const MapFamily f = io::load_map(o.map);
  const GridSpec grid{d->bbox(), o.nx, o.ny};
  const WindingChart chart = winding_per_plaquette(sample(f, grid, *d));
  const AtomicDistribution atoms = atoms_from_windings(chart, d);
  if (!o.csv.empty()) io::write_file_atomic(o.csv, io::chart_csv(chart));
  emit(o,
       {{"map", io::to_json(f)},
        {"grid", {{"nx", o.nx}, {"ny", o.ny}, {"hx", grid.hx()}, {"hy", grid.hy()}}},
        {"plaquettes", chart.plaquettes},
        {"total_degree", chart.total},
        {"atoms", io::to_json(atoms)},
        {"warnings", warnings_of(chart)}},
       out);
  return 0;
}

int run_flatnorm(const Options& o, std::ostream& out) {
  const DomainPtr d = domain_of(o);
  require(o.atoms, "--atoms");
  const AtomicDistribution t = io::load_distribution(o.atoms, d);
  const NormKind kind{o.beta};
  Decomposition dec;
  if (o.solver == "matching") {
    dec = solve_matching(t, kind);
  } else if (o.solver == "bruteforce") {
    dec = solve_bruteforce(t, kind);
  } else {
    throw SchemaError("--solver must be matching or bruteforce");
  }
  json doc = io::to_json(dec);
  doc["solver"] = o.solver;
  doc["structure_report"] = io::to_json(verify_structure(dec, t, *d));
  emit(o, doc, out);
  return 0;
}

int run_dual(const Options& o, std::ostream& out) {
  const DomainPtr d = domain_of(o);
  require(o.atoms, "--atoms");
  const AtomicDistribution t = io::load_distribution(o.atoms, d);
  const Decomposition dec = solve_matching(t, NormKind{o.beta});
  const DualCertificate cert = build_certificate(t, dec);
  const DualityReport rep = verify_duality(cert, t, dec, o.seed);
  if (!o.csv.empty()) io::write_file_atomic(o.csv, io::grid_csv(sample_on_grid(cert, o.nx, o.ny)));
  json warnings = json::array();
  if (cert.failed) warnings.push_back("duality gap above tolerance");
  if (!rep.passed()) warnings.push_back("certificate failed verification");
  emit(o,
       {{"value", dec.value},
        {"certificate", io::to_json(cert)},
        {"duality_report", io::to_json(rep)},
        {"warnings", warnings}},
       out);
  return 0;
}

int run_area(const Options& o, std::ostream& out) {
  const DomainPtr d = domain_of(o);
  require(o.map, "--map");
  const MapFamily f = io::load_map(o.map);
  emit(o, io::to_json(relaxed_area_upper_bound(f, d, NormKind{o.beta})), out);
  return 0;
}

int run_envelope(const Options& o, std::ostream& out) {
  const DomainPtr d = domain_of(o);
  require(o.map, "--map");
  if (!o.eps) throw SchemaError("missing required option --eps");
  const MapFamily f = io::load_map(o.map);
  const AtomicDistribution atoms = analytic_jacobian_atoms(f, d);
  const auto cut = puncture_set_for_eps(atoms, *o.eps);
  std::vector<Point2> centers;
  for (const auto& a : to_signed_atoms(atoms)) {
    if (contains(*d, a.location) == Membership::interior) centers.push_back(a.location);
  }

  json punctures = json::array();
  for (const Point2 p : cut) punctures.push_back(io::to_json(p));
  json table = json::array();
  auto row = [&](const char* label, std::span<const Point2> c) {
    const AreaReport r = punctured_upper_bound(f, d, c);
    table.push_back({{"punctures", label},
                     {"count", c.size()},
                     {"dirichlet_area", r.dirichlet_area},
                     {"singular_term", r.singular_term},
                     {"upper_bound", r.upper_bound}});
  };
  row("none", {});
  row("eps", cut);
  row("all", centers);
  emit(o,
       {{"eps", *o.eps},
        {"puncture_set", punctures},
        {"double_relaxation", double_relaxation_value(f, *d)},
        {"table", table}},
       out);
  return 0;
}

int run_selftest(const Options& o, std::ostream& out) {
  const selftest::SuiteReport rep = selftest::run_suite(o.seed);
  for (const auto& c : rep.criteria) out << selftest::format_line(c) << '\n';
  if (!o.out.empty()) io::write_file_atomic(o.out, io::dump(rep.artifact));
  return rep.passed() ? 0 : 1;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flat norms of atomic distributions and area bounds for S1-valued maps", "flatconn"};
  app.require_subcommand(1);
  Options o;
  std::string grid;

  auto add = [&](const char* name, const char* help, bool inputs) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (inputs) {
      sub->add_option("--domain", o.domain, "domain JSON");
      sub->add_option("--map", o.map, "map JSON");
      sub->add_option("--atoms", o.atoms, "atom CSV or pair JSON");
      sub->add_option("--beta", o.beta, "segment weight (default 2)");
      sub->add_option("--grid", grid, "sampling grid NxM (default 256x256)");
      sub->add_option("--csv", o.csv, "CSV output path");
      sub->add_option("--eps", o.eps, "singular-term budget");
      sub->add_option("--solver", o.solver, "matching or bruteforce");
    }
    sub->add_option("--out", o.out, "JSON output path (default stdout)");
    sub->add_option("--seed", o.seed, "random seed (default 0)");
    return sub;
  };
  CLI::App* jac = add("jacobian", "extract Jacobian atoms from plaquette windings", true);
  CLI::App* flat = add("flatnorm", "optimal point/dipole decomposition", true);
  CLI::App* dual = add("dual", "dual certificate and its verification", true);
  CLI::App* area = add("area", "relaxed-area upper bound", true);
  CLI::App* env = add("envelope", "puncture set and punctured bounds", true);
  CLI::App* self = add("selftest", "run the acceptance suite", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!grid.empty()) parse_grid(grid, o);
    if (*jac) return run_jacobian(o, out);
    if (*flat) return run_flatnorm(o, out);
    if (*dual) return run_dual(o, out);
    if (*area) return run_area(o, out);
    if (*env) return run_envelope(o, out);
    if (*self) return run_selftest(o, out);
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace flatconn::cli
