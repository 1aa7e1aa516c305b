#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mslab {

// Flat config text, one `key = value` per line, `#` starts a comment.
//
//   key    := segment ('.' segment)*
//   segment:= ident ('[' digits ']')?        ident = [A-Za-z_][A-Za-z0-9_-]*
//   value  := scalar | '[' (scalar (',' scalar)*)? ']'
//   scalar := number | bareword | '"' chars '"'
//
// Keys may appear once. Keys ending in `.file` name files that must exist when parsed.
struct ConfigValue {
  std::vector<std::string> items;  // one item for scalars
  bool is_list = false;
  int line = 0;
  int column = 0;  // of the value
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, int column, const std::string& what);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string key_;
  int line_;
  int column_;
};

class RunConfig {
 public:
  static RunConfig parse(const std::string& text, const std::filesystem::path& base = {});
  static RunConfig load(const std::filesystem::path& path);

  // Canonical text: keys sorted, numbers as written.
  std::string serialize() const;
  // FNV-1a 64 of serialize(), as 16 hex digits.
  std::string hash() const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, ConfigValue>& values() const noexcept { return values_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  // Range-checked variants; bounds are inclusive.
  double get_double(const std::string& key, double fallback, double lo, double hi) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback, long lo, long hi) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  // Number of `prefix[i]` groups, i dense from 0.
  std::size_t count_indexed(const std::string& prefix) const;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set_list(const std::string& key, const std::vector<std::string>& items);
  void erase(const std::string& key) { values_.erase(key); }

  std::string experiment() const { return get_string("experiment"); }
  std::filesystem::path output_dir() const;  // OUTPUT_DIR overrides output_dir when set
  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed", 1, 0, 1L << 62)); }

  friend bool operator==(const RunConfig& a, const RunConfig& b);

 private:
  [[noreturn]] void fail_key(const std::string& key, const std::string& what) const;
  const ConfigValue& scalar(const std::string& key) const;

  std::map<std::string, ConfigValue> values_;
};

std::string format_number(double x);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace mslab
