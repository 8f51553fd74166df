#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polygaf {

// Flat key = value configuration ('#' comments, blank lines ignored). Values
// stay strings until read through a typed getter; getters throw
// std::invalid_argument on malformed numbers so the CLI can map them to its
// config-error exit code.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // Comma-separated list of reals, e.g. "5,8".
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace polygaf
