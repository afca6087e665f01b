#include "hbi/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hbi/errors.hpp"

namespace hbi {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config key \"" + key + "\" has malformed value \"" + value + "\"");
}

}  // namespace

double ConfigFile::get_double(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v);
    return out;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

int ConfigFile::get_int(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t used = 0;
    int out = std::stoi(v, &used);
    if (used != v.size()) bad_value(key, v);
    return out;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

std::uint64_t ConfigFile::get_u64(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t used = 0;
    std::uint64_t out = std::stoull(v, &used);
    if (used != v.size()) bad_value(key, v);
    return out;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

bool ConfigFile::get_bool(const std::string& key) const {
  const std::string& v = get_string(key);
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  bad_value(key, v);
}

const std::string& ConfigFile::get_string(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw std::out_of_range("config key \"" + key + "\" not present");
  return it->second;
}

std::vector<int> ConfigFile::get_int_list(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<int> out;
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cell, &used));
      if (used != cell.size()) bad_value(key, cell);
    } catch (const std::logic_error&) {
      bad_value(key, cell);
    }
  }
  if (out.empty()) bad_value(key, get_string(key));
  return out;
}

ConfigFile load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  ConfigFile cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string(), line_no, "expected \"key = value\"");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(path.string(), line_no, "empty key or value");
    if (cfg.values.count(key))
      throw ParseError(path.string(), line_no, "duplicate key \"" + key + "\"");
    cfg.values[key] = value;
  }
  return cfg;
}

}  // namespace hbi
