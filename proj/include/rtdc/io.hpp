#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "rtdc/dtnu.hpp"

namespace rtdc {

/// Malformed input document. what() carries "line L, column C" for syntax
/// errors and a JSON pointer for schema errors.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses JSON text, reporting syntax errors by line and column.
nlohmann::json parse_json_text(std::string_view text, const std::string& source = "input");
nlohmann::json read_json_file(const std::filesystem::path& path);

Dtnu dtnu_from_json(const nlohmann::json& j);
nlohmann::json dtnu_to_json(const Dtnu& dtnu);

Dtnu parse_dtnu(std::string_view text, const std::string& source = "input");
Dtnu load_dtnu(const std::filesystem::path& path);
std::string serialize_dtnu(const Dtnu& dtnu);

/// Time values are written as decimal strings ("12.5", "7/3", "inf");
/// integers are accepted on input.
TimeValue time_from_json(const nlohmann::json& j, const std::string& pointer);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rtdc
