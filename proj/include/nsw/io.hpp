#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "nsw/instance.hpp"

namespace nsw {

// Malformed or semantically invalid input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"num_items": m, "agents": [{"weight": "p/q", "values": ["v", ...]}, ...]}
// Rationals may be "p/q", decimal strings, or JSON numbers.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& instance);  // original units, "p/q" strings

// {"owner": [agent-or-null, ...]}
Allocation allocation_from_json(const nlohmann::json& j);
nlohmann::json allocation_to_json(const Allocation& alloc);

// Parses text, reporting syntax errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source_name);
nlohmann::json read_json_file(const std::filesystem::path& path);

Instance read_instance(const std::filesystem::path& path);
Allocation read_allocation(const std::filesystem::path& path);

// Pretty-printed with a trailing newline; byte-stable for equal inputs.
std::string to_text(const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nsw
