#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace oscal::detail {

using Json = nlohmann::ordered_json;

// Parsed JSON plus the line where each value starts, keyed by JSON pointer.
struct LocatedJson {
  Json value;
  std::map<std::string, std::size_t> lines;

  // Line of `pointer`, falling back to its nearest recorded ancestor.
  std::size_t line_of(std::string pointer) const;
};

// Throws DocumentError on syntax errors and duplicate keys.
LocatedJson parse_located(std::string_view text);

std::string pointer_token(const std::string& key);

}  // namespace oscal::detail
