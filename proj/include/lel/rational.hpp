#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "lel/error.hpp"

namespace lel {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw ParameterError("zero denominator");
  Rational r{Integer(num), Integer(den)};
  r.canonicalize();
  return r;
}

/// Parses "n" or "n/d" with an optional leading minus sign; no spaces.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = text[0] == '-' ? 1 : 0;
  std::size_t slash = std::string_view::npos;
  if (i == text.size()) return std::nullopt;
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] == '/') {
      if (slash != std::string_view::npos || k == i || k + 1 == text.size())
        return std::nullopt;
      slash = k;
    } else if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      return std::nullopt;
    }
  }
  Rational r;
  if (r.set_str(std::string(text), 10) != 0) return std::nullopt;
  if (r.get_den() == 0) return std::nullopt;
  r.canonicalize();
  return r;
}

inline Rational require_rational(std::string_view text) {
  auto r = parse_rational(text);
  if (!r) throw ParameterError("not a rational: '" + std::string(text) + "'");
  return *r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational pow(Rational base, unsigned exp) {
  Rational out = 1;
  while (exp) {
    if (exp & 1u) out *= base;
    base *= base;
    exp >>= 1u;
  }
  return out;
}

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Closed interval [lo, hi] with lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw DomainError("interval with hi < lo");
  }

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool degenerate() const { return lo == hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::string to_string(const Interval& i) {
  return "[" + to_string(i.lo) + ", " + to_string(i.hi) + "]";
}

/// Two-sided enclosure of a quantity that is only known up to a tail.
struct Bracket {
  Rational lower;
  Rational upper;

  bool exact() const { return lower == upper; }
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  friend bool operator==(const Bracket&, const Bracket&) = default;
};

}  // namespace lel
