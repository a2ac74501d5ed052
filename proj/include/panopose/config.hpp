#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace panopose {

/// Plain-text key=value file; '#' starts a comment, blank lines ignored.
class KeyValueFile {
 public:
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int_or(const std::string& key, int fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace panopose
