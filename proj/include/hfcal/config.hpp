#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfcal {

// Configuration problems. The message always names the offending section or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigSection {
 public:
  ConfigSection(std::string source, std::string name, std::map<std::string, std::string> values)
      : source_(std::move(source)), name_(std::move(name)), values_(std::move(values)) {}

  const std::string& name() const { return name_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::vector<std::string> keys() const;

  // All getters throw ConfigError when the key is absent or malformed.
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  // Rejects keys that are not in `allowed`.
  void require_only(const std::vector<std::string>& allowed) const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_;
  std::string name_;
  std::map<std::string, std::string> values_;
};

// `[section]` headers followed by `key = value` lines; `#` and `;` start comments.
class ConfigFile {
 public:
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(std::istream& in, const std::string& source);

  bool has_section(const std::string& name) const;
  const ConfigSection& section(const std::string& name) const;
  std::vector<std::string> section_names() const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<ConfigSection> sections_;
};

}  // namespace hfcal
