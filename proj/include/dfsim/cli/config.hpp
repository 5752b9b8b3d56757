#pragma once

// Flat key = value scenario files.
//
//   # comment
//   preset = eta-vacuum
//   n = 4
//   q = [0.5, -0.5+0.1j, 0, 0]
//
// Keys are case-sensitive. Values are strings, reals, integers, complex
// numbers written as `re+imj`, or bracketed lists of those.

#include <complex>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dfsim/types.hpp"

namespace dfsim::cli {

class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// Adds or replaces one entry; `assignment` is `key=value`.
  void set(std::string_view assignment);
  void set(const std::string& key, const std::string& value);

  [[nodiscard]] bool has(const std::string& key) const;
  [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

  [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] std::string require_string(const std::string& key) const;
  [[nodiscard]] double get_real(const std::string& key, double fallback) const;
  [[nodiscard]] int get_int(const std::string& key, int fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
  [[nodiscard]] cplx get_complex(const std::string& key, cplx fallback) const;
  [[nodiscard]] std::vector<double> get_real_list(const std::string& key, std::vector<double> fallback) const;
  [[nodiscard]] std::vector<cplx> get_complex_list(const std::string& key) const;

  /// Keys never read by any getter. Used to reject typos.
  [[nodiscard]] std::vector<std::string> unused_keys() const;

 private:
  [[nodiscard]] const std::string* lookup(const std::string& key) const;

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace dfsim::cli
