#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xtalk/matrix.hpp"

namespace xtalk {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
/// Throws ConfigError on malformed input.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

/// "a,b,c"
std::string format_list(std::span<const double> values);
std::vector<double> parse_list(std::string_view text);

/// Row-major, ',' between entries and ';' between rows: "1,0.4;0.3,1".
std::string format_matrix(const Matrix& m);
Matrix parse_matrix(std::string_view text);

/// Flat UTF-8 `key = value` document. '#' starts a comment line; blank
/// lines are ignored. Key order is preserved so output is reproducible.
class KeyValueDoc {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;  // source line, 0 when set programmatically
  };

  /// Throws ConfigError naming `origin` and the line on malformed input or
  /// duplicate keys.
  static KeyValueDoc parse(std::string_view text, std::string_view origin = "<text>");
  /// Throws IoError if unreadable.
  static KeyValueDoc load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  void set(std::string key, double value) { set(std::move(key), format_double(value)); }

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  /// Throws ConfigError when absent.
  const std::string& at(std::string_view key) const;
  int line_of(std::string_view key) const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::string& origin() const noexcept { return origin_; }

  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<Entry> entries_;
  std::string origin_ = "<text>";
};

}  // namespace xtalk
