#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace chillops {

/// Flat key/value run configuration. Every tunable in the toolkit has a
/// registered default; loading a document with an unknown key or a value of
/// the wrong type is a config error, so typos fail fast instead of silently
/// running on defaults.
class RunConfig {
 public:
  RunConfig();  // registry defaults

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);

  void set(const std::string& key, const nlohmann::ordered_json& value);

  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  /// Numeric value or nullopt when the key holds the string "first"
  /// (used by kalman.x0).
  std::optional<double> get_optional_double(const std::string& key) const;

  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed")); }

  /// FNV-1a over the canonical dump; recorded in every output header.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  const nlohmann::ordered_json& values() const { return values_; }

 private:
  const nlohmann::ordered_json& at(const std::string& key) const;
  nlohmann::ordered_json values_;
};

/// "chillops <version> config=<hash> seed=<seed>" — the first line of every
/// artifact file (as a '#' comment for tables, a "header" object for JSON).
std::string artifact_header(const RunConfig& cfg);

}  // namespace chillops
