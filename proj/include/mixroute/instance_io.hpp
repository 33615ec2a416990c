#pragma once

#include <iosfwd>
#include <string>

#include "mixroute/core_model.hpp"

namespace mixroute {

/// Parses the JSON instance format. Unknown or missing fields and wrong
/// value types raise BadInstance; the result is not yet validated.
InstanceSpec parse_instance(std::istream& in);
InstanceSpec parse_instance(const std::string& text);

/// Reads and validates an instance file.
GameInstance load_instance(const std::string& path);

std::string dump_instance(const InstanceSpec& spec);

}  // namespace mixroute
