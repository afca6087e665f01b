#ifndef HBI_CONFIG_HPP
#define HBI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hbi {

/// Key-value run configuration: one `key = value` per line, `#` comments.
/// Keys mirror the CLI long flags; flags given on the command line win.
struct ConfigFile {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;  // comma separated
};

ConfigFile load_config_file(const std::filesystem::path& path);

}  // namespace hbi

#endif
