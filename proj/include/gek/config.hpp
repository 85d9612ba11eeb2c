#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gek/error.hpp"

namespace gek::config {

class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : Error("cli", "config " + (pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(std::move(pointer)) {}

  /// JSON pointer of the offending value.
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

enum class Kind { boolean, integer, number, string, path, string_list, path_list, choice };

/// One configurable setting. `section` is the subcommand path ("score-sdm",
/// or "gen-diagnostics", "synonym"); empty for global settings.
struct Entry {
  std::vector<std::string> section;
  std::string key;
  Kind kind = Kind::string;
  std::string description;
  std::optional<double> minimum;
  std::vector<std::string> choices;
  std::optional<nlohmann::json> default_value;
};

/// A validated setting flattened to command-line style text inputs.
struct Setting {
  std::vector<std::string> section;
  std::string key;
  std::vector<std::string> inputs;
};

class Schema {
 public:
  void add(Entry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// JSON Schema (draft 2020-12) describing the config file.
  nlohmann::ordered_json json_schema() const;

  /// Checks a parsed config document; unknown keys, wrong types and values
  /// out of range raise ConfigError naming the JSON pointer.
  std::vector<Setting> validate(const nlohmann::json& document) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace gek::config
