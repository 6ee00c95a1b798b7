#pragma once

// Scenario config text:
//
//   # comment
//   key = value            # trailing comment
//
// Values are typed by the subcommand's schema: integers, reals, exact
// rationals ("1/2", "0.05", "1"), strings (bare, or "double quoted" with \"
// and \\ escapes), and comma-separated lists of rationals or strings. Keys
// are [a-z_][a-z0-9_]*; unknown and repeated keys are errors.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "prenelab/core/error.hpp"
#include "prenelab/core/rational.hpp"

namespace prenelab::cli {

enum class ValueType { Int, UInt, Real, Rational, String, RationalList, StringList };

using Value = std::variant<std::int64_t, std::uint64_t, double, Rational, std::string, std::vector<Rational>,
                           std::vector<std::string>>;

struct KeySpec {
  std::string name;
  ValueType type;
  Value default_value;
  std::optional<double> min;  // numeric keys and rational-list elements
  std::optional<double> max;
  std::vector<std::string> choices;  // string keys and string-list elements
};

struct Schema {
  std::string command;
  std::vector<KeySpec> keys;

  [[nodiscard]] const KeySpec* find(std::string_view name) const {
    for (const auto& k : keys) {
      if (k.name == name) return &k;
    }
    return nullptr;
  }
};

enum class ConfigErrorKind { Syntax, UnknownKey, DuplicateKey, TypeMismatch, RangeViolation };

inline std::string_view to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::Syntax: return "syntax error";
    case ConfigErrorKind::UnknownKey: return "unknown key";
    case ConfigErrorKind::DuplicateKey: return "duplicate key";
    case ConfigErrorKind::TypeMismatch: return "type mismatch";
    case ConfigErrorKind::RangeViolation: return "range violation";
  }
  return "error";
}

class ConfigError : public Error {
 public:
  ConfigError(ConfigErrorKind kind, std::size_t line, std::string key, const std::string& detail)
      : Error(Errc::InvalidConfig, describe(kind, line, key, detail)),
        kind_(kind),
        line_(line),
        key_(std::move(key)),
        detail_(detail) {}

  [[nodiscard]] ConfigErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] const std::string& key() const noexcept { return key_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string describe(ConfigErrorKind kind, std::size_t line, const std::string& key,
                              const std::string& detail) {
    std::string msg = "line " + std::to_string(line) + ": " + std::string(to_string(kind));
    if (!key.empty()) msg += " for key '" + key + "'";
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  ConfigErrorKind kind_;
  std::size_t line_;
  std::string key_;
  std::string detail_;
};

class RunConfig {
 public:
  explicit RunConfig(const Schema& schema) : schema_(&schema) {
    for (const auto& k : schema.keys) values_.emplace(k.name, k.default_value);
  }

  [[nodiscard]] const Schema& schema() const noexcept { return *schema_; }
  [[nodiscard]] const std::map<std::string, Value>& values() const noexcept { return values_; }

  template <typename T>
  [[nodiscard]] const T& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(Errc::InvalidConfig, "no key '" + key + "' in " + schema_->command);
    return std::get<T>(it->second);
  }

  void set(const std::string& key, Value v) { values_.at(key) = std::move(v); }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.schema_->command == b.schema_->command && a.values_ == b.values_;
  }

 private:
  const Schema* schema_;
  std::map<std::string, Value> values_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

inline bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  if (!((key[0] >= 'a' && key[0] <= 'z') || key[0] == '_')) return false;
  for (char c : key) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

/// Splits "value  # comment" respecting double quotes. Returns nullopt on an
/// unterminated quote.
inline std::optional<std::string_view> strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (quoted && s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s[i] == '#') return s.substr(0, i);
  }
  if (quoted) return std::nullopt;
  return s;
}

/// Splits on commas outside quotes.
inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (quoted && s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

inline std::optional<std::string> parse_string(std::string_view s) {
  if (s.empty() || s.front() != '"') {
    if (s.find('"') != std::string_view::npos) return std::nullopt;
    return std::string(s);
  }
  if (s.size() < 2 || s.back() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      if (i + 2 >= s.size()) return std::nullopt;
      c = s[++i];
      if (c != '"' && c != '\\') return std::nullopt;
    } else if (c == '"') {
      return std::nullopt;
    }
    out += c;
  }
  return out;
}

inline std::string quote_if_needed(const std::string& s, bool in_list) {
  bool needs = s.empty() ? in_list : false;
  auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  if (!s.empty() && (blank(s.front()) || blank(s.back()))) needs = true;
  for (char c : s) {
    if (c == '#' || c == '"' || c == '\\' || (in_list && c == ',')) needs = true;
  }
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
  T v{};
  if (s.empty() || s.front() == '+') return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  if (s.empty() || s.front() == '+') return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses and range-checks one value. Throws ConfigError(line, key).
inline Value parse_value(const KeySpec& spec, std::string_view text, std::size_t line) {
  auto mismatch = [&](const std::string& what) -> Value {
    throw ConfigError(ConfigErrorKind::TypeMismatch, line, spec.name, "expected " + what + ", got '" +
                                                                          std::string(text) + "'");
  };
  auto range = [&](double v, const std::string& shown) {
    if ((spec.min && v < *spec.min) || (spec.max && v > *spec.max)) {
      std::string bounds = "[" + (spec.min ? fmt::format("{}", *spec.min) : std::string("-inf")) + ", " +
                           (spec.max ? fmt::format("{}", *spec.max) : std::string("inf")) + "]";
      throw ConfigError(ConfigErrorKind::RangeViolation, line, spec.name, shown + " is outside " + bounds);
    }
  };
  auto choice = [&](const std::string& v) {
    if (spec.choices.empty()) return;
    for (const auto& c : spec.choices) {
      if (c == v) return;
    }
    std::string allowed;
    for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : "|") + c;
    throw ConfigError(ConfigErrorKind::RangeViolation, line, spec.name, "'" + v + "' is not one of " + allowed);
  };
  auto rational_in_range = [&](const Rational& r) {
    if (spec.min && r < Rational(*spec.min)) range(*spec.min - 1.0, prenelab::to_string(r));
    if (spec.max && r > Rational(*spec.max)) range(*spec.max + 1.0, prenelab::to_string(r));
  };

  switch (spec.type) {
    case ValueType::Int: {
      auto v = detail::parse_integer<std::int64_t>(text);
      if (!v) return mismatch("an integer");
      range(static_cast<double>(*v), std::to_string(*v));
      return *v;
    }
    case ValueType::UInt: {
      auto v = detail::parse_integer<std::uint64_t>(text);
      if (!v) return mismatch("a non-negative integer");
      range(static_cast<double>(*v), std::to_string(*v));
      return *v;
    }
    case ValueType::Real: {
      auto v = detail::parse_real(text);
      if (!v) return mismatch("a real number");
      range(*v, fmt::format("{}", *v));
      return *v;
    }
    case ValueType::Rational: {
      auto v = try_parse_rational(text);
      if (!v) return mismatch("a rational such as 1/2");
      rational_in_range(*v);
      return *v;
    }
    case ValueType::String: {
      auto v = detail::parse_string(text);
      if (!v) return mismatch("a string");
      choice(*v);
      return *v;
    }
    case ValueType::RationalList: {
      std::vector<Rational> out;
      if (text.empty()) return out;
      for (auto item : detail::split_list(text)) {
        auto v = try_parse_rational(item);
        if (!v) return mismatch("a comma-separated list of rationals");
        rational_in_range(*v);
        out.push_back(*v);
      }
      return out;
    }
    case ValueType::StringList: {
      std::vector<std::string> out;
      if (text.empty()) return out;
      for (auto item : detail::split_list(text)) {
        auto v = detail::parse_string(item);
        if (!v || v->empty()) return mismatch("a comma-separated list of strings");
        choice(*v);
        out.push_back(*v);
      }
      return out;
    }
  }
  return mismatch("a value");
}

inline std::string format_value(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return fmt::format("{}", x); }
    std::string operator()(const Rational& x) const { return prenelab::to_string(x); }
    std::string operator()(const std::string& x) const { return detail::quote_if_needed(x, false); }
    std::string operator()(const std::vector<Rational>& xs) const {
      std::string out;
      for (const auto& x : xs) out += (out.empty() ? "" : ", ") + prenelab::to_string(x);
      return out;
    }
    std::string operator()(const std::vector<std::string>& xs) const {
      std::string out;
      for (const auto& x : xs) out += (out.empty() ? "" : ", ") + detail::quote_if_needed(x, true);
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

/// Never throws anything but ConfigError.
inline RunConfig parse_config(std::string_view text, const Schema& schema) {
  RunConfig config(schema);
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (!detail::valid_utf8(raw)) throw ConfigError(ConfigErrorKind::Syntax, line_no, "", "invalid UTF-8");
    if (raw.find('\0') != std::string_view::npos) {
      throw ConfigError(ConfigErrorKind::Syntax, line_no, "", "NUL byte");
    }
    auto body = detail::strip_comment(raw);
    if (!body) throw ConfigError(ConfigErrorKind::Syntax, line_no, "", "unterminated quote");
    std::string_view line = detail::trim(*body);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(ConfigErrorKind::Syntax, line_no, "", "expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    if (!detail::valid_key(key)) throw ConfigError(ConfigErrorKind::Syntax, line_no, key, "malformed key");
    const KeySpec* spec = schema.find(key);
    if (!spec) throw ConfigError(ConfigErrorKind::UnknownKey, line_no, key, "not valid for " + schema.command);
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(ConfigErrorKind::DuplicateKey, line_no, key, "first set on line " + std::to_string(it->second));
    }
    seen.emplace(key, line_no);
    config.set(key, parse_value(*spec, detail::trim(line.substr(eq + 1)), line_no));
  }
  return config;
}

/// Canonical text: every key in schema order. parse_config(serialize(c)) == c.
inline std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& spec : config.schema().keys) {
    out += spec.name + " = " + format_value(config.values().at(spec.name)) + "\n";
  }
  return out;
}

}  // namespace prenelab::cli
