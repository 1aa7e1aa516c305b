#include "mslab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mslab {
namespace {

std::string where(const std::string& key, int line, int column) {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ", column " << column << ": ";
  if (!key.empty()) os << "key '" << key << "': ";
  return os.str();
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Returns the column (1-based) of the first offending character, or 0 when the key is valid.
int check_key(const std::string& k) {
  std::size_t i = 0;
  while (true) {
    if (i >= k.size() || !ident_start(k[i])) return static_cast<int>(i) + 1;
    while (i < k.size() && ident_char(k[i])) ++i;
    if (i < k.size() && k[i] == '[') {
      const std::size_t j = ++i;
      while (i < k.size() && std::isdigit(static_cast<unsigned char>(k[i]))) ++i;
      if (i == j || i >= k.size() || k[i] != ']') return static_cast<int>(i) + 1;
      ++i;
    }
    if (i == k.size()) return 0;
    if (k[i] != '.') return static_cast<int>(i) + 1;
    ++i;
  }
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '[' || c == ']' ||
        c == '#' || c == '"' || c == '=')
      return true;
  return false;
}

std::string quote(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e && std::isfinite(out);
}

}  // namespace

ConfigError::ConfigError(const std::string& key, int line, int column, const std::string& what)
    : std::runtime_error(where(key, line, column) + what), key_(key), line_(line), column_(column) {}

RunConfig RunConfig::parse(const std::string& text, const std::filesystem::path& base) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    // Strip comments outside quotes.
    std::string line;
    bool q = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const char c = raw[i];
      if (c == '\\' && q && i + 1 < raw.size()) {
        line += c;
        line += raw[++i];
        continue;
      }
      if (c == '"') q = !q;
      if (c == '#' && !q) break;
      line += c;
    }
    if (q) throw ConfigError("", lineno, static_cast<int>(line.size()) + 1, "unterminated string");
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", lineno, 1, "expected 'key = value'");
    std::size_t kstart = 0;
    while (kstart < eq && std::isspace(static_cast<unsigned char>(line[kstart]))) ++kstart;
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", lineno, static_cast<int>(kstart) + 1, "missing key");
    if (const int bad = check_key(key))
      throw ConfigError(key, lineno, static_cast<int>(kstart) + bad, "malformed key");
    if (cfg.values_.count(key)) throw ConfigError(key, lineno, static_cast<int>(kstart) + 1, "duplicate key");

    std::size_t vstart = eq + 1;
    while (vstart < line.size() && std::isspace(static_cast<unsigned char>(line[vstart]))) ++vstart;
    const int vcol = static_cast<int>(vstart) + 1;
    std::string body = trim(line.substr(eq + 1));
    ConfigValue v;
    v.line = lineno;
    v.column = vcol;
    if (body.empty()) throw ConfigError(key, lineno, vcol, "missing value");

    auto scalar_items = [&](const std::string& s, int col) {
      std::vector<std::string> items;
      std::string cur;
      bool inq = false, quoted = false;
      for (std::size_t i = 0; i <= s.size(); ++i) {
        const char c = i < s.size() ? s[i] : ',';
        if (inq) {
          if (c == '\\' && i + 1 < s.size()) {
            cur += s[++i];
          } else if (c == '"') {
            inq = false;
          } else {
            cur += c;
          }
          continue;
        }
        if (c == '"') {
          if (!trim(cur).empty()) throw ConfigError(key, lineno, col + static_cast<int>(i), "stray quote");
          cur.clear();
          inq = quoted = true;
          continue;
        }
        if (c == ',') {
          const std::string item = quoted ? cur : trim(cur);
          if (!quoted && item.empty())
            throw ConfigError(key, lineno, col + static_cast<int>(i), "empty list item");
          items.push_back(item);
          cur.clear();
          quoted = false;
          continue;
        }
        if (c == '[' || c == ']' || c == '=')
          throw ConfigError(key, lineno, col + static_cast<int>(i), std::string("unexpected '") + c + "'");
        if (quoted && !std::isspace(static_cast<unsigned char>(c)))
          throw ConfigError(key, lineno, col + static_cast<int>(i), "text after closing quote");
        cur += c;
      }
      return items;
    };

    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(key, lineno, vcol + static_cast<int>(body.size()), "expected ']'");
      v.is_list = true;
      const std::string inner = body.substr(1, body.size() - 2);
      if (!trim(inner).empty()) v.items = scalar_items(inner, vcol + 1);
    } else {
      v.items = scalar_items(body, vcol);
      if (v.items.size() != 1) throw ConfigError(key, lineno, vcol, "lists must be written in brackets");
    }
    const std::string suffix = ".file";
    if (key.size() >= suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0) {
      std::filesystem::path p(v.items.at(0));
      if (p.is_relative() && !base.empty()) p = base / p;
      if (!std::filesystem::exists(p)) throw ConfigError(key, lineno, vcol, "file does not exist: " + p.string());
    }
    cfg.values_.emplace(key, std::move(v));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, 0, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) {
    os << k << " = ";
    if (v.is_list) {
      os << '[';
      for (std::size_t i = 0; i < v.items.size(); ++i) os << (i ? ", " : "") << quote(v.items[i]);
      os << ']';
    } else {
      os << quote(v.items.at(0));
    }
    os << '\n';
  }
  return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize())));
  return buf;
}

void RunConfig::fail_key(const std::string& key, const std::string& what) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, 0, 0, what);
  throw ConfigError(key, it->second.line, it->second.column, what);
}

const ConfigValue& RunConfig::scalar(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail_key(key, "missing required key");
  if (it->second.is_list) fail_key(key, "expected a scalar, got a list");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key) const { return scalar(key).items.at(0); }

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double RunConfig::get_double(const std::string& key) const {
  double x = 0.0;
  if (!parse_double(scalar(key).items.at(0), x)) fail_key(key, "expected a number");
  return x;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

double RunConfig::get_double(const std::string& key, double fallback, double lo, double hi) const {
  const double x = get_double(key, fallback);
  if (!(x >= lo && x <= hi)) {
    std::ostringstream os;
    os << "value " << x << " outside [" << lo << ", " << hi << "]";
    fail_key(key, os.str());
  }
  return x;
}

long RunConfig::get_int(const std::string& key) const {
  const std::string& s = scalar(key).items.at(0);
  long x = 0;
  const char* b = s.data();
  if (!s.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, s.data() + s.size(), x);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) fail_key(key, "expected an integer");
  return x;
}

long RunConfig::get_int(const std::string& key, long fallback, long lo, long hi) const {
  const long x = has(key) ? get_int(key) : fallback;
  if (x < lo || x > hi) {
    std::ostringstream os;
    os << "value " << x << " outside [" << lo << ", " << hi << "]";
    fail_key(key, os.str());
  }
  return x;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  fail_key(key, "expected true or false");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail_key(key, "missing required key");
  std::vector<double> out;
  for (const auto& s : it->second.items) {
    double x = 0.0;
    if (!parse_double(s, x)) fail_key(key, "expected a list of numbers");
    out.push_back(x);
  }
  return out;
}

std::vector<double> RunConfig::get_doubles(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? get_doubles(key) : fallback;
}

std::size_t RunConfig::count_indexed(const std::string& prefix) const {
  std::size_t n = 0;
  while (true) {
    const std::string head = prefix + "[" + std::to_string(n) + "]";
    const auto it = values_.lower_bound(head);
    if (it == values_.end() || it->first.compare(0, head.size(), head) != 0) return n;
    ++n;
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (check_key(key)) throw ConfigError(key, 0, 0, "malformed key");
  ConfigValue v;
  v.items = {value};
  values_[key] = std::move(v);
}

void RunConfig::set(const std::string& key, double value) { set(key, format_number(value)); }

void RunConfig::set_list(const std::string& key, const std::vector<std::string>& items) {
  if (check_key(key)) throw ConfigError(key, 0, 0, "malformed key");
  ConfigValue v;
  v.items = items;
  v.is_list = true;
  values_[key] = std::move(v);
}

std::filesystem::path RunConfig::output_dir() const {
  if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
  return get_string("output_dir", "out");
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  if (a.values_.size() != b.values_.size()) return false;
  for (auto ia = a.values_.begin(), ib = b.values_.begin(); ia != a.values_.end(); ++ia, ++ib)
    if (ia->first != ib->first || ia->second.items != ib->second.items ||
        ia->second.is_list != ib->second.is_list)
      return false;
  return true;
}

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace mslab
