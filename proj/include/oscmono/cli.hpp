#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscmono/model.hpp"

namespace oscmono::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";

// one subcommand result, ready for either output format
struct Artifact {
  std::string name;  // subcommand, also the schema name suffix
  nlohmann::json data;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

std::string format_number(double x);  // %.17g
std::string serialize(const Artifact& art, const OscillatorParams& prm, const std::string& format);

// exit codes: 0 ok, 2 input, 3 domain, 4 numerical
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oscmono::cli
