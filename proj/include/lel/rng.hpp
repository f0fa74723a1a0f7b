#pragma once

#include <cstdint>
#include <random>

#include "lel/rational.hpp"

namespace lel {

/// Seeded source of dyadic rationals. Bounded draws use rejection on the raw
/// 64-bit stream so results do not depend on the standard library's
/// distribution implementations.
class DyadicSampler {
 public:
  explicit DyadicSampler(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t r = eng_();
      if (r < limit) return r % n;
    }
  }

  bool coin() { return below(2) == 1; }

  /// k / 2^bits, k uniform in [0, 2^bits].
  Rational dyadic(unsigned bits) {
    std::uint64_t n = std::uint64_t{1} << bits;
    Rational r(Integer(static_cast<unsigned long>(below(n + 1))), Integer(static_cast<unsigned long>(n)));
    r.canonicalize();
    return r;
  }

  /// Non-degenerate subinterval of within with dyadic relative endpoints of
  /// resolution at most 2^-max_bits; short and long intervals both occur.
  Interval interval(const Interval& within, unsigned max_bits = 16) {
    unsigned b = 1 + static_cast<unsigned>(below(max_bits));
    std::uint64_t n = std::uint64_t{1} << b;
    std::uint64_t i = below(n);
    std::uint64_t j = coin() ? std::min(n, i + 1 + below(3)) : i + 1 + below(n - i);
    auto at = [&](std::uint64_t k) -> Rational {
      Rational r(Integer(static_cast<unsigned long>(k)), Integer(static_cast<unsigned long>(n)));
      r.canonicalize();
      return within.lo + r * within.length();
    };
    return {at(i), at(j)};
  }

  /// A point of within at dyadic resolution 2^-bits.
  Rational point(const Interval& within, unsigned bits = 16) {
    return within.lo + dyadic(bits) * within.length();
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lel
