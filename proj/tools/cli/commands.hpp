#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace flatconn::cli {

struct Options {
  std::string domain;
  std::string map;
  std::string atoms;
  std::string out;  // JSON document; stdout when empty
  std::string csv;  // grid or chart CSV, written only when given
  std::string solver = "matching";
  double beta = 2.0;
  std::size_t nx = 256;
  std::size_t ny = 256;
  std::uint64_t seed = 0;
  std::optional<double> eps;
};

// Parses "NxM".
void parse_grid(const std::string& text, Options& o);

int run_jacobian(const Options& o, std::ostream& out);
int run_flatnorm(const Options& o, std::ostream& out);
int run_dual(const Options& o, std::ostream& out);
int run_area(const Options& o, std::ostream& out);
int run_envelope(const Options& o, std::ostream& out);
int run_selftest(const Options& o, std::ostream& out);

// Full command line: subcommand dispatch and the exit code contract
// (0 ok, 2 bad input, 3 solver guard, 1 anything else).
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace flatconn::cli
