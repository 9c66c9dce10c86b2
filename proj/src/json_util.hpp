#pragma once

// Shared helpers for the JSON-backed file formats. Not installed.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "secblocks/error.hpp"

namespace secblocks::detail {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text);

// Output is pretty-printed with two-space indentation plus a trailing newline.
std::string dump_json(const Json& j);

const Json& require(const Json& obj, std::string_view key, std::string_view where);
std::string require_string(const Json& obj, std::string_view key, std::string_view where);
std::optional<std::string> optional_string(const Json& obj, std::string_view key,
                                           std::string_view where);
std::vector<std::string> string_array(const Json& j, std::string_view where);
const Json& require_array(const Json& obj, std::string_view key, std::string_view where);
long long require_integer(const Json& obj, std::string_view key, std::string_view where);
void require_object(const Json& j, std::string_view where);

// Parses an enumeration spelling or throws UnknownKind naming the field.
template <typename Enum, typename Parser>
Enum parse_enum(Parser parser, const std::string& value, std::string_view what) {
  if (auto v = parser(value)) return *v;
  throw Error(ErrorKind::UnknownKind,
              "unknown " + std::string(what) + " '" + value + "'");
}

}  // namespace secblocks::detail
