#include "gek/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gek/io.hpp"

namespace gek::config {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string escape_pointer(const std::string& token) {
  std::string out;
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string pointer_of(const std::vector<std::string>& section, const std::string& key = {}) {
  std::string p;
  for (const auto& s : section) p += "/" + escape_pointer(s);
  if (!key.empty()) p += "/" + escape_pointer(key);
  return p;
}

ordered_json type_of(const Entry& e) {
  ordered_json t;
  switch (e.kind) {
    case Kind::boolean: t["type"] = "boolean"; break;
    case Kind::integer:
      t["type"] = "integer";
      if (e.minimum) t["minimum"] = static_cast<long long>(*e.minimum);
      break;
    case Kind::number:
      t["type"] = "number";
      if (e.minimum) t["minimum"] = *e.minimum;
      break;
    case Kind::string:
    case Kind::path: t["type"] = "string"; break;
    case Kind::choice:
      t["type"] = "string";
      t["enum"] = e.choices;
      break;
    case Kind::string_list:
    case Kind::path_list:
      t["type"] = "array";
      t["items"] = {{"type", "string"}};
      break;
  }
  if (!e.description.empty()) t["description"] = e.description;
  if (e.default_value) t["default"] = *e.default_value;
  return t;
}

std::string scalar_text(const Entry& e, const json& v, const std::string& where) {
  auto fail = [&](const std::string& expected) -> std::string {
    throw ConfigError(where, "expected " + expected + ", got " + std::string(v.type_name()));
  };
  switch (e.kind) {
    case Kind::boolean:
      if (!v.is_boolean()) fail("a boolean");
      return v.get<bool>() ? "true" : "false";
    case Kind::integer: {
      if (!v.is_number_integer()) fail("an integer");
      const auto n = v.get<long long>();
      if (e.minimum && static_cast<double>(n) < *e.minimum) {
        throw ConfigError(where, "must be >= " + format_double(*e.minimum));
      }
      return std::to_string(n);
    }
    case Kind::number: {
      if (!v.is_number()) fail("a number");
      const auto x = v.get<double>();
      if (!std::isfinite(x)) throw ConfigError(where, "must be finite");
      if (e.minimum && x < *e.minimum) {
        throw ConfigError(where, "must be >= " + format_double(*e.minimum));
      }
      return format_double(x);
    }
    case Kind::choice: {
      if (!v.is_string()) fail("a string");
      auto s = v.get<std::string>();
      if (std::find(e.choices.begin(), e.choices.end(), s) == e.choices.end()) {
        std::string options;
        for (const auto& c : e.choices) options += (options.empty() ? "" : ", ") + c;
        throw ConfigError(where, "'" + s + "' is not one of " + options);
      }
      return s;
    }
    default:
      if (!v.is_string()) fail("a string");
      if (v.get<std::string>().empty()) throw ConfigError(where, "must not be empty");
      return v.get<std::string>();
  }
}

}  // namespace

ordered_json Schema::json_schema() const {
  ordered_json root;
  root["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  root["title"] = "gek configuration";
  root["type"] = "object";
  root["properties"] = ordered_json::object();
  root["additionalProperties"] = false;
  for (const auto& e : entries_) {
    ordered_json* node = &root;
    for (const auto& s : e.section) {
      auto& child = (*node)["properties"][s];
      if (child.is_null()) {
        child["type"] = "object";
        child["properties"] = ordered_json::object();
        child["additionalProperties"] = false;
      }
      node = &child;
    }
    (*node)["properties"][e.key] = type_of(e);
  }
  return root;
}

std::vector<Setting> Schema::validate(const json& document) const {
  if (!document.is_object()) throw ConfigError("", "expected an object");

  std::map<std::vector<std::string>, std::map<std::string, const Entry*>> by_section;
  for (const auto& e : entries_) {
    by_section[e.section][e.key] = &e;
    // Every prefix of a section is a known object.
    for (std::size_t n = 0; n < e.section.size(); ++n) {
      by_section[{e.section.begin(), e.section.begin() + static_cast<std::ptrdiff_t>(n)}];
    }
  }

  std::vector<Setting> out;
  auto visit = [&](auto&& self, const json& node, std::vector<std::string> section) -> void {
    const auto& known = by_section[section];
    for (const auto& [key, value] : node.items()) {
      const auto where = pointer_of(section, key);
      auto it = known.find(key);
      if (it == known.end()) {
        auto child = section;
        child.push_back(key);
        if (!by_section.contains(child)) throw ConfigError(where, "unknown setting");
        if (!value.is_object()) throw ConfigError(where, "expected an object");
        self(self, value, std::move(child));
        continue;
      }
      const Entry& e = *it->second;
      Setting s{section, key, {}};
      if (e.kind == Kind::string_list || e.kind == Kind::path_list) {
        if (!value.is_array()) throw ConfigError(where, "expected an array of strings");
        Entry item = e;
        item.kind = Kind::string;
        for (std::size_t i = 0; i < value.size(); ++i) {
          s.inputs.push_back(scalar_text(item, value[i], where + "/" + std::to_string(i)));
        }
      } else {
        s.inputs.push_back(scalar_text(e, value, where));
      }
      out.push_back(std::move(s));
    }
  };
  visit(visit, document, {});
  return out;
}

}  // namespace gek::config
