#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldmix/errors.hpp"

namespace fieldmix {

/// Invalid experiment configuration (the CLI exits with status 2).
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Flat key-value settings. Keys are "section.key"; lookups for a task try
/// "flag.key" (command-line overrides), "<task>.key", "run.key", then "model.key".
class Settings {
 public:
  /// Reads an INI file. Throws ConfigError when it cannot be parsed.
  static Settings from_ini_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::optional<std::string> lookup(const std::string& task, const std::string& key) const;

  std::string text(const std::string& task, const std::string& key, const std::string& fallback) const;
  double number(const std::string& task, const std::string& key, double fallback) const;
  long long integer(const std::string& task, const std::string& key, long long fallback) const;
  std::optional<std::uint64_t> seed(const std::string& task) const;
  /// Comma separated numbers; throws ConfigError when the result is empty.
  std::vector<double> grid(const std::string& task, const std::string& key, const std::vector<double>& fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

std::vector<double> parse_number_list(const std::string& text);

}  // namespace fieldmix
