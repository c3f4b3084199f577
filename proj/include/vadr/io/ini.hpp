#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vadr::io {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Flat sectioned key=value text. Section names may repeat ([dimension] in
// particular); entry order is preserved so serialisation is stable.
struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }

  std::string get(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw ConfigError("[" + name + "] missing key '" + key + "'");
    return *v;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
  }

  double get_double(const std::string& key) const {
    return parse_double(name, key, get(key));
  }
  double get_double_or(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    return v ? parse_double(name, key, *v) : fallback;
  }
  long get_int(const std::string& key) const {
    return parse_int(name, key, get(key));
  }
  long get_int_or(const std::string& key, long fallback) const {
    const std::string* v = find(key);
    return v ? parse_int(name, key, *v) : fallback;
  }
  bool get_bool_or(const std::string& key, bool fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw ConfigError("[" + name + "] key '" + key + "': expected bool, got '" +
                      *v + "'");
  }

  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries)
      if (k == key) {
        v = value;
        return;
      }
    entries.emplace_back(key, value);
  }

  static double parse_double(const std::string& section, const std::string& key,
                             const std::string& raw) {
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("[" + section + "] key '" + key +
                      "': expected number, got '" + raw + "'");
  }

  static long parse_int(const std::string& section, const std::string& key,
                        const std::string& raw) {
    try {
      std::size_t used = 0;
      const long v = std::stol(raw, &used);
      if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("[" + section + "] key '" + key +
                      "': expected integer, got '" + raw + "'");
  }
};

struct IniFile {
  std::vector<IniSection> sections;

  const IniSection* find(const std::string& name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }

  std::vector<const IniSection*> find_all(const std::string& name) const {
    std::vector<const IniSection*> out;
    for (const auto& s : sections)
      if (s.name == name) out.push_back(&s);
    return out;
  }

  IniSection& add(const std::string& name) {
    sections.push_back({name, {}});
    return sections.back();
  }

  static IniFile parse(const std::string& text) {
    IniFile file;
    IniSection* current = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ConfigError("line " + std::to_string(lineno) +
                            ": unterminated section header");
        current = &file.add(trim(t.substr(1, t.size() - 2)));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": expected key = value");
      if (!current)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": key outside any section");
      current->entries.emplace_back(trim(t.substr(0, eq)),
                                    trim(t.substr(eq + 1)));
    }
    return file;
  }

  static IniFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  std::string serialize() const {
    std::ostringstream out;
    for (const auto& s : sections) {
      out << "[" << s.name << "]\n";
      for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
      out << "\n";
    }
    return out.str();
  }
};

}  // namespace vadr::io
