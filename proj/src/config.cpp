#include "corrma/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace corrma {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key '" + key + "' outside any [section]");
    cfg.sections_[section][key] = {value, lineno};
  }
  return cfg;
}

bool KeyValueConfig::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

bool KeyValueConfig::has(const std::string& section,
                         const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) != 0;
}

std::string KeyValueConfig::get(const std::string& section,
                                const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end())
    throw ConfigError(origin_ + ": missing section [" + section + "]");
  const auto kit = it->second.find(key);
  if (kit == it->second.end())
    throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section +
                      "]");
  return kit->second.value;
}

std::string KeyValueConfig::get_or(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

long KeyValueConfig::get_long(const std::string& section,
                              const std::string& key) const {
  const std::string v = get(section, key);
  char* end = nullptr;
  const long out = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not an integer: '" + v + "'");
  return out;
}

long KeyValueConfig::get_long_or(const std::string& section,
                                 const std::string& key, long fallback) const {
  return has(section, key) ? get_long(section, key) : fallback;
}

double KeyValueConfig::get_double(const std::string& section,
                                  const std::string& key) const {
  const std::string v = get(section, key);
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not a number: '" + v + "'");
  return out;
}

double KeyValueConfig::get_double_or(const std::string& section,
                                     const std::string& key,
                                     double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64_or(const std::string& section,
                                         const std::string& key,
                                         std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key);
  char* end = nullptr;
  const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not an unsigned integer: '" + v + "'");
  return static_cast<std::uint64_t>(out);
}

bool KeyValueConfig::get_bool_or(const std::string& section,
                                 const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get(section, key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                    "] is not a boolean: '" + v + "'");
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& section, const std::string& key) const {
  std::istringstream in(get(section, key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                        "] has a non-numeric entry: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is an empty list");
  return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(
    const std::string& section, const std::string& key) const {
  std::istringstream in(get(section, key));
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  if (out.empty())
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is an empty list");
  return out;
}

void KeyValueConfig::restrict_keys(
    const std::string& section, const std::vector<std::string>& allowed) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return;
  for (const auto& [key, entry] : it->second) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                        ": unknown key '" + key + "' in [" + section + "]");
  }
}

std::vector<std::pair<std::string, std::string>> KeyValueConfig::items(
    const std::string& section) const {
  std::vector<std::pair<std::string, std::string>> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& [key, entry] : it->second) out.emplace_back(key, entry.value);
  return out;
}

}  // namespace corrma
