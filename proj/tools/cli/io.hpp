#pragma once

// File formats of the command-line tool: domain, map and pair JSON, atom CSV,
// and the JSON/CSV documents written by each subcommand.

#include <string>
#include <string_view>

#include <json.hpp>

#include "flatconn/area.hpp"
#include "flatconn/dual.hpp"
#include "flatconn/flatnorm.hpp"
#include "flatconn/jacobian.hpp"

namespace flatconn::io {

using nlohmann::json;

// Parsers raise SchemaError naming the file and the offending field or line.
Domain parse_domain(const json& j, std::string_view source = "domain");
MapFamily parse_map(const json& j, std::string_view source = "map");
AtomicDistribution parse_pairs(const json& j, DomainPtr d, std::string_view source = "pairs");
SignedAtomList parse_atoms_csv(std::string_view text, std::string_view source = "atoms");

std::string read_file(const std::string& path);
json read_json(const std::string& path);
Domain load_domain(const std::string& path);
MapFamily load_map(const std::string& path);
// *.json files hold pole pairs, anything else is atom CSV.
AtomicDistribution load_distribution(const std::string& path, DomainPtr d);

json to_json(Point2 p);
json to_json(const Domain& d);
json to_json(const AtomicDistribution& t);
json to_json(const StructureReport& r);
json to_json(const Decomposition& dec);
json to_json(const DualityReport& r);
json to_json(const DualCertificate& c);
json to_json(const AreaReport& r);
json to_json(const MapFamily& f);

std::string grid_csv(const ScalarGrid& g);
std::string chart_csv(const WindingChart& c);
std::string atoms_csv(const SignedAtomList& atoms);

// Shortest text that reads back to the same double; "nan" for NaN.
std::string format_number(double v);
std::string dump(const json& j);

// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace flatconn::io
