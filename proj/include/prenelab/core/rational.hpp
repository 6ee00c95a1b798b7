#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "prenelab/core/error.hpp"

namespace prenelab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// "p/q" or "p" when q = 1.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace detail {

inline std::optional<BigInt> parse_digits(std::string_view text) {
  if (text.empty()) return std::nullopt;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  return BigInt(std::string(text));
}

}  // namespace detail

/// Exact parse of "p/q", "p", or a plain decimal such as "0.05" (read as 1/20).
/// Returns nullopt on any malformed input; never throws.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty() || text.size() > 4096) return std::nullopt;

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = detail::parse_digits(text.substr(0, slash));
    auto den = detail::parse_digits(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    value = Rational(*num, *den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole_part = text.substr(0, dot);
    auto frac_part = text.substr(dot + 1);
    if (whole_part.empty() && frac_part.empty()) return std::nullopt;
    BigInt whole = 0;
    if (!whole_part.empty()) {
      auto w = detail::parse_digits(whole_part);
      if (!w) return std::nullopt;
      whole = *w;
    }
    BigInt frac = 0;
    BigInt scale = 1;
    if (!frac_part.empty()) {
      auto f = detail::parse_digits(frac_part);
      if (!f) return std::nullopt;
      frac = *f;
      for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    }
    value = Rational(whole) + Rational(frac, scale);
  } else {
    auto num = detail::parse_digits(text);
    if (!num) return std::nullopt;
    value = Rational(*num);
  }
  return negative ? Rational(-value) : value;
}

inline Rational parse_rational(std::string_view text) {
  if (auto r = try_parse_rational(text)) return *r;
  throw Error(Errc::Parse, "not a rational number: '" + std::string(text) + "'");
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace prenelab
