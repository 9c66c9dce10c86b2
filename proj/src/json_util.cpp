#include "json_util.hpp"

namespace secblocks::detail {

namespace {

// nlohmann reports a byte offset; line/column are what a person can act on.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void shape_error(std::string_view where, const std::string& what) {
  throw SyntaxError(std::string(where) + ": " + what, 0, 0);
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    throw SyntaxError("malformed JSON document", line, column);
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void require_object(const Json& j, std::string_view where) {
  if (!j.is_object()) shape_error(where, "expected an object");
}

const Json& require(const Json& obj, std::string_view key, std::string_view where) {
  require_object(obj, where);
  auto it = obj.find(key);
  if (it == obj.end()) shape_error(where, "missing key '" + std::string(key) + "'");
  return *it;
}

std::string require_string(const Json& obj, std::string_view key, std::string_view where) {
  const Json& v = require(obj, key, where);
  if (!v.is_string()) shape_error(where, "'" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json& obj, std::string_view key,
                                           std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) shape_error(where, "'" + std::string(key) + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_array(const Json& j, std::string_view where) {
  if (!j.is_array()) shape_error(where, "expected an array of strings");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_string()) shape_error(where, "expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

const Json& require_array(const Json& obj, std::string_view key, std::string_view where) {
  const Json& v = require(obj, key, where);
  if (!v.is_array()) shape_error(where, "'" + std::string(key) + "' must be an array");
  return v;
}

long long require_integer(const Json& obj, std::string_view key, std::string_view where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number_integer()) shape_error(where, "'" + std::string(key) + "' must be an integer");
  return v.get<long long>();
}

}  // namespace secblocks::detail
