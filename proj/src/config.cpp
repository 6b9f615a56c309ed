#include "hfcal/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace hfcal {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Trailing comments are allowed after values.
std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return trim(pos == std::string::npos ? s : s.substr(0, pos));
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<std::string> ConfigSection::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

void ConfigSection::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(source_ + ": [" + name_ + "] key '" + key + "': " + what);
}

const std::string& ConfigSection::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(key, "missing");
  return it->second;
}

double ConfigSection::number(const std::string& key) const {
  double v = 0.0;
  if (!parse_double(text(key), v)) fail(key, "not a number: '" + text(key) + "'");
  return v;
}

std::int64_t ConfigSection::integer(const std::string& key) const {
  const std::string& s = text(key);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "not an integer: '" + s + "'");
  return v;
}

std::uint64_t ConfigSection::unsigned_integer(const std::string& key) const {
  const std::string& s = text(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(key, "not an unsigned integer: '" + s + "'");
  }
  return v;
}

bool ConfigSection::flag(const std::string& key) const {
  const std::string& s = text(key);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(key, "not a boolean: '" + s + "'");
}

std::vector<double> ConfigSection::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_double(trim(item), v)) fail(key, "bad list element '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

void ConfigSection::require_only(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : values_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(k, "unknown key");
  }
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": line " + std::to_string(e.line()) + ": " + e.message());
  }
  ConfigFile file;
  file.source_ = source;
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      throw ConfigError(source + ": key '" + name + "' outside of any [section]");
    }
    std::map<std::string, std::string> values;
    for (const auto& [key, leaf] : child) values[key] = strip_comment(leaf.data());
    file.sections_.emplace_back(source, name, std::move(values));
  }
  return file;
}

bool ConfigFile::has_section(const std::string& name) const {
  return std::any_of(sections_.begin(), sections_.end(),
                     [&](const ConfigSection& s) { return s.name() == name; });
}

const ConfigSection& ConfigFile::section(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name() == name) return s;
  }
  throw ConfigError(source_ + ": missing section [" + name + "]");
}

std::vector<std::string> ConfigFile::section_names() const {
  std::vector<std::string> out;
  for (const auto& s : sections_) out.push_back(s.name());
  return out;
}

}  // namespace hfcal
