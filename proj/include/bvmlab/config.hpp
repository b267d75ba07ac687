#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvmlab {

class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Plain-text `key = value` configuration with [section] headers. Keys are
/// addressed as "section.key". Every key must be consumed by the reader;
/// finish() reports leftovers with their line numbers so typos cannot pass
/// silently.
class KeyValueConfig {
public:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };

  static KeyValueConfig parse_string(const std::string& text, std::string origin) {
    KeyValueConfig cfg;
    cfg.origin_ = std::move(origin);
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(strip_comment(line));
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw config_error(cfg.at_line(line_no) + ": unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty())
          throw config_error(cfg.at_line(line_no) + ": empty section name");
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw config_error(cfg.at_line(line_no) + ": expected 'key = value'");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw config_error(cfg.at_line(line_no) + ": empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (cfg.entries_.count(full))
        throw config_error(cfg.at_line(line_no) + ": duplicate key '" + full + "'");
      cfg.entries_[full] = Entry{value, line_no};
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  const std::string& origin() const { return origin_; }

  std::optional<std::string> raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.consumed = true;
    return it->second.value;
  }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    return parse_as<T>(key, *v);
  }

  template <typename T>
  T require(const std::string& key) const {
    const auto v = raw(key);
    if (!v) throw config_error(origin_ + ": missing required key '" + key + "'");
    return parse_as<T>(key, *v);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  /// Throws if any key was never consumed, naming each with its line.
  void finish() const {
    std::ostringstream msg;
    bool any = false;
    for (const auto& [key, entry] : entries_) {
      if (entry.consumed) continue;
      if (any) msg << "; ";
      msg << origin_ << ":" << entry.line << ": unknown key '" << key << "'";
      any = true;
    }
    if (any) throw config_error(msg.str());
  }

private:
  std::string at_line(int line) const { return origin_ + ":" + std::to_string(line); }

  static std::string strip_comment(const std::string& s) {
    const auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  template <typename T>
  T parse_as(const std::string& key, const std::string& value) const {
    std::istringstream in(value);
    T out;
    in >> out;
    if (in.fail() || !in.eof())
      throw config_error(origin_ + ": key '" + key + "' has malformed value '" + value + "'");
    return out;
  }

  std::map<std::string, Entry> entries_;
  std::string origin_;
};

template <>
inline std::string KeyValueConfig::parse_as<std::string>(const std::string&,
                                                         const std::string& value) const {
  return value;
}

template <>
inline bool KeyValueConfig::parse_as<bool>(const std::string& key,
                                           const std::string& value) const {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw config_error(origin_ + ": key '" + key + "' has non-boolean value '" + value + "'");
}

template <>
inline std::vector<int> KeyValueConfig::parse_as<std::vector<int>>(
    const std::string& key, const std::string& value) const {
  std::vector<int> out;
  std::istringstream in(value);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::istringstream item(token);
    int v = 0;
    item >> v;
    if (item.fail() || !(item >> std::ws).eof())
      throw config_error(origin_ + ": key '" + key + "' has malformed list entry '" + token + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw config_error(origin_ + ": key '" + key + "' must list at least one integer");
  return out;
}

} // namespace bvmlab
