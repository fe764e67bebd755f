// Command-line front end.
#pragma once

#include "oats/decomposition.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oats::cli {

// An angle given on the command line. "pi/2", "-2pi/5", "pi" keep the exact
// pi fraction; anything else is read as decimal radians.
struct AngleArg {
  double radians;
  std::optional<PiFraction> exact;
};

AngleArg parse_angle(const std::string& text);

// Half-integer from "3", "-1/2", "0.5".
int parse_twice_half_integer(const std::string& text);

// Resolves a relative output path against $OATS_OUTPUT_DIR when set.
std::string resolve_output_path(const std::string& path);

// Runs one invocation; args[0] is the program name. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oats::cli
