#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/io.hpp"
#include "flatconn/errors.hpp"

using namespace flatconn;
using nlohmann::json;

namespace {

const std::string data = FLATCONN_TEST_DATA;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "flatconn");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::current_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("flatnorm on the dipole fixture") {
  const auto r = run({"flatnorm", "--domain", data + "/disc.json", "--atoms", data + "/pair.csv", "--beta", "2"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(j["beta"].get<double>() == 2.0);
  CHECK(j["R"].empty());
  CHECK(j["S"].size() == 1);
  CHECK(j["structure_report"]["b"] == "pass");

  const auto brute = run({"flatnorm", "--solver", "bruteforce", "--domain", data + "/disc.json", "--atoms", data + "/pair.csv"});
  CHECK(json::parse(brute.out)["value"] == j["value"]);
}

TEST_CASE("flatnorm on empty atoms") {
  const auto r = run({"flatnorm", "--domain", data + "/disc.json", "--atoms", data + "/empty.csv"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == 0.0);
}

TEST_CASE("area of the vortex fixture") {
  const auto r = run({"area", "--domain", data + "/disc.json", "--map", data + "/vortex.json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["upper_bound"].get<double>() == doctest::Approx(10.3536).epsilon(1e-4));
  CHECK(j["singular_term"].get<double>() == doctest::Approx(std::numbers::pi));
  CHECK(j["quadrature"]["rule"].is_string());
}

TEST_CASE("outputs re-parse") {
  const std::string out = (std::filesystem::current_path() / "dual.json").string();
  const std::string csv = (std::filesystem::current_path() / "dual.csv").string();
  auto r = run({"dual", "--domain", data + "/disc.json", "--atoms", data + "/pair.csv", "--grid", "16x12", "--out", out,
                "--csv", csv});
  REQUIRE(r.code == 0);
  const json j = io::read_json(out);
  CHECK(j["duality_report"]["passed"] == true);
  CHECK(j["warnings"].empty());
  std::ifstream in(csv);
  std::string header, dims;
  std::getline(in, header);
  std::getline(in, dims);
  CHECK(header == "nx,ny,xmin,xmax,ymin,ymax");
  CHECK(dims.starts_with("16,12,"));

  r = run({"jacobian", "--domain", data + "/disc.json", "--map", data + "/dipole.json", "--grid", "96x96"});
  REQUIRE(r.code == 0);
  const json jac = json::parse(r.out);
  CHECK(jac["total_degree"] == 0);
  const auto domain = std::make_shared<const Domain>(io::load_domain(data + "/disc.json"));
  const auto atoms = io::parse_pairs(jac["atoms"], domain);
  CHECK(to_signed_atoms(atoms).size() == 2);

  r = run({"envelope", "--domain", data + "/disc.json", "--map", data + "/dipole.json", "--eps", "0.5"});
  REQUIRE(r.code == 0);
  const json env = json::parse(r.out);
  REQUIRE(env["table"].size() == 3);
  CHECK(env["table"][2]["singular_term"].get<double>() == 0.0);
  CHECK(env["table"][0]["upper_bound"].get<double>() >= env["table"][1]["upper_bound"].get<double>());

  const auto decomposition = json::parse(run({"flatnorm", "--domain", data + "/disc.json", "--atoms", data + "/pair.csv"}).out);
  CHECK(io::parse_domain(io::to_json(*domain)).edges().size() == 720);
  CHECK(decomposition["S"][0]["a"][0].get<double>() == -0.1);
}

TEST_CASE("input errors exit with code 2") {
  auto r = run({"flatnorm", "--domain", data + "/disc.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--atoms") != std::string::npos);

  const auto bad_csv = write_temp("bad.csv", "x,y,multiplicity\n0.1,0.2,1\n0.3,oops,-1\n");
  r = run({"flatnorm", "--domain", data + "/disc.json", "--atoms", bad_csv});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(r.err.find("'y'") != std::string::npos);

  const auto bad_domain = write_temp("bad_domain.json", R"({"outer": [[0, 0], [1, 0], [1, "a"]]})");
  r = run({"area", "--domain", bad_domain, "--map", data + "/vortex.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("outer[2][1]") != std::string::npos);

  const auto bad_map = write_temp("bad_map.json", R"({"family": "spiral"})");
  r = run({"area", "--domain", data + "/disc.json", "--map", bad_map});
  CHECK(r.code == 2);
  CHECK(r.err.find("spiral") != std::string::npos);

  r = run({"dual", "--domain", data + "/disc.json", "--atoms", data + "/pair.csv", "--beta", "1"});
  CHECK(r.code == 2);
  r = run({"jacobian", "--domain", data + "/disc.json", "--map", data + "/vortex.json", "--grid", "12by12"});
  CHECK(r.code == 2);
  r = run({"transport"});
  CHECK(r.code == 2);
  r = run({"envelope", "--domain", data + "/disc.json", "--map", data + "/vortex.json"});
  CHECK(r.code == 2);
}

TEST_CASE("solver guard exits with code 3") {
  std::string csv = "x,y,multiplicity\n";
  for (int k = 0; k < 9; ++k) csv += std::to_string(-0.8 + 0.2 * k) + ",0.3,1\n";
  const auto path = write_temp("nine.csv", csv);
  const auto r = run({"flatnorm", "--solver", "bruteforce", "--domain", data + "/disc.json", "--atoms", path});
  CHECK(r.code == 3);
  CHECK(run({"flatnorm", "--domain", data + "/disc.json", "--atoms", path}).code == 0);
}

TEST_CASE("csv atoms") {
  const auto atoms = io::parse_atoms_csv("# comment\nx,y,multiplicity\n0.5, 0.25 ,2\n\n-0.1,0,-1\r\n");
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].location == Point2{0.5, 0.25});
  CHECK(atoms[0].multiplicity == 2);
  CHECK_THROWS_AS(io::parse_atoms_csv("0.1,0.1,0\n"), SchemaError);
  CHECK_THROWS_AS(io::parse_atoms_csv("0.1,0.1\n"), SchemaError);
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(std::nan("")) == "nan");
}
