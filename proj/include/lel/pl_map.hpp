#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lel/error.hpp"
#include "lel/rational.hpp"

namespace lel {

/// Continuous piecewise-linear map between closed intervals, stored as the
/// graph's corner points. Adjacent pieces with equal slope are merged on
/// construction, so two maps are equal iff their node lists are equal.
class PLMap {
 public:
  PLMap(std::vector<Rational> xs, std::vector<Rational> ys,
        std::optional<Interval> codomain = std::nullopt)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
      throw ConstructionError("PLMap needs at least two matching nodes");
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i - 1] < xs_[i]))
        throw ConstructionError("PLMap breakpoints must strictly increase");
    merge_collinear();
    auto [lo, hi] = std::minmax_element(ys_.begin(), ys_.end());
    Interval image(*lo, *hi);
    codomain_ = codomain.value_or(image);
    if (!codomain_.contains(image))
      throw ConstructionError("PLMap image leaves its codomain");
  }

  static PLMap affine(const Interval& dom, const Rational& slope,
                      const Rational& intercept) {
    if (dom.degenerate()) throw ConstructionError("PLMap on a point");
    return PLMap({dom.lo, dom.hi},
                 {slope * dom.lo + intercept, slope * dom.hi + intercept});
  }

  static PLMap identity(const Interval& dom) {
    return PLMap({dom.lo, dom.hi}, {dom.lo, dom.hi}, dom);
  }

  Interval domain() const { return {xs_.front(), xs_.back()}; }
  const Interval& codomain() const { return codomain_; }
  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& ys() const { return ys_; }
  std::size_t piece_count() const { return xs_.size() - 1; }
  bool is_self_map() const { return domain() == codomain_; }

  Rational slope(std::size_t piece) const {
    return (ys_[piece + 1] - ys_[piece]) / (xs_[piece + 1] - xs_[piece]);
  }

  /// Index of the piece containing x (the left one at an interior node).
  std::size_t piece_of(const Rational& x) const {
    if (!domain().contains(x))
      throw DomainError("point " + to_string(x) + " outside " +
                        to_string(domain()));
    auto it = std::lower_bound(xs_.begin() + 1, xs_.end(), x);
    return static_cast<std::size_t>(it - xs_.begin()) - 1;
  }

  Rational operator()(const Rational& x) const {
    std::size_t i = piece_of(x);
    if (x == xs_[i]) return ys_[i];
    if (x == xs_[i + 1]) return ys_[i + 1];
    return ys_[i] + slope(i) * (x - xs_[i]);
  }

  Rational lipschitz() const {
    Rational best = 0;
    for (std::size_t i = 0; i < piece_count(); ++i) best = max(best, abs(slope(i)));
    return best;
  }

  PLMap with_codomain(const Interval& c) const { return PLMap(xs_, ys_, c); }

  /// Restriction to a non-degenerate subinterval of the domain.
  PLMap restrict(const Interval& j) const {
    if (!domain().contains(j) || j.degenerate())
      throw DomainError("bad restriction " + to_string(j));
    std::vector<Rational> xs{j.lo}, ys{(*this)(j.lo)};
    auto it = std::upper_bound(xs_.begin(), xs_.end(), j.lo);
    for (; it != xs_.end() && *it < j.hi; ++it) {
      xs.push_back(*it);
      ys.push_back(ys_[static_cast<std::size_t>(it - xs_.begin())]);
    }
    xs.push_back(j.hi);
    ys.push_back((*this)(j.hi));
    return PLMap(std::move(xs), std::move(ys), codomain_);
  }

  friend bool operator==(const PLMap& a, const PLMap& b) {
    return a.xs_ == b.xs_ && a.ys_ == b.ys_ && a.codomain_ == b.codomain_;
  }

 private:
  void merge_collinear() {
    std::vector<Rational> xs{xs_[0]}, ys{ys_[0]};
    for (std::size_t i = 1; i + 1 < xs_.size(); ++i) {
      // Keep node i unless slopes on both sides agree.
      Rational left = (ys_[i] - ys.back()) * (xs_[i + 1] - xs_[i]);
      Rational right = (ys_[i + 1] - ys_[i]) * (xs_[i] - xs.back());
      if (left != right) {
        xs.push_back(xs_[i]);
        ys.push_back(ys_[i]);
      }
    }
    xs.push_back(xs_.back());
    ys.push_back(ys_.back());
    xs_ = std::move(xs);
    ys_ = std::move(ys);
  }

  std::vector<Rational> xs_;
  std::vector<Rational> ys_;
  Interval codomain_;
};

/// g after f. Throws ResourceError when the result would exceed budget pieces.
inline PLMap compose(const PLMap& g, const PLMap& f,
                     std::size_t budget = static_cast<std::size_t>(-1)) {
  if (!g.domain().contains(f.codomain()))
    throw DomainError("compose: codomain " + to_string(f.codomain()) +
                      " not inside domain " + to_string(g.domain()));
  const auto& fx = f.xs();
  const auto& fy = f.ys();
  const auto& gx = g.xs();
  const auto& gy = g.ys();
  std::vector<Rational> xs{fx[0]}, ys{g(fy[0])};
  for (std::size_t i = 0; i + 1 < fx.size(); ++i) {
    const Rational& y0 = fy[i];
    const Rational& y1 = fy[i + 1];
    if (y0 != y1) {
      Rational inv = (fx[i + 1] - fx[i]) / (y1 - y0);
      if (y0 < y1) {
        auto it = std::upper_bound(gx.begin(), gx.end(), y0);
        for (; it != gx.end() && *it < y1; ++it) {
          xs.push_back(fx[i] + (*it - y0) * inv);
          ys.push_back(gy[static_cast<std::size_t>(it - gx.begin())]);
        }
      } else {
        auto it = std::lower_bound(gx.begin(), gx.end(), y0);
        while (it != gx.begin()) {
          --it;
          if (!(*it > y1)) break;
          xs.push_back(fx[i] + (*it - y0) * inv);
          ys.push_back(gy[static_cast<std::size_t>(it - gx.begin())]);
        }
      }
    }
    xs.push_back(fx[i + 1]);
    ys.push_back(g(y1));
    if (xs.size() - 1 > budget)
      throw ResourceError("composition exceeds " + std::to_string(budget) +
                          " pieces");
  }
  return PLMap(std::move(xs), std::move(ys), g.codomain());
}

/// Exact image of a closed subinterval (degenerate allowed).
inline Interval image_interval(const PLMap& f, const Interval& j) {
  if (!f.domain().contains(j))
    throw DomainError("image_interval: " + to_string(j) + " not in domain");
  Rational lo = f(j.lo), hi = lo;
  auto take = [&](const Rational& y) {
    if (y < lo) lo = y;
    if (hi < y) hi = y;
  };
  take(f(j.hi));
  const auto& xs = f.xs();
  auto it = std::upper_bound(xs.begin(), xs.end(), j.lo);
  for (; it != xs.end() && *it < j.hi; ++it)
    take(f.ys()[static_cast<std::size_t>(it - xs.begin())]);
  return {lo, hi};
}

/// Number of maximal monotone pieces; a constant map has one lap.
inline std::size_t lap_count(const PLMap& f) {
  std::size_t laps = 1;
  int last = 0;
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    int s = sgn(f.ys()[i + 1] - f.ys()[i]);
    if (s == 0) continue;
    if (last != 0 && s != last) ++laps;
    last = s;
  }
  return laps;
}

struct LapSequence {
  std::vector<std::size_t> laps;  // laps[i] = laps(f^(i+1))
  bool truncated = false;         // stopped early on the piece budget
};

namespace detail {

/// Walks the pieces of f^m over [lo, hi] in order (reversed when asked) and
/// feeds the sign of each piece to emit. Returns false once budget pieces
/// have been visited.
template <class Emit>
bool walk_iterate_signs(const PLMap& f, std::size_t m, const Rational& lo, const Rational& hi,
                        bool reversed, std::size_t& budget, Emit& emit) {
  if (m == 0 || lo == hi) {
    if (budget == 0) return false;
    --budget;
    emit(lo == hi ? 0 : (reversed ? -1 : 1));
    return true;
  }
  const auto& xs = f.xs();
  std::size_t first = f.piece_of(lo);
  std::size_t last = f.piece_of(hi);
  if (lo == xs[first + 1] && first < last) ++first;
  for (std::size_t step = 0; step <= last - first; ++step) {
    std::size_t i = reversed ? last - step : first + step;
    Rational a = max(lo, xs[i]), b = min(hi, xs[i + 1]);
    if (!(a < b)) continue;
    Rational fa = f(a), fb = f(b);
    bool down = fb < fa;
    const Rational& ilo = down ? fb : fa;
    const Rational& ihi = down ? fa : fb;
    if (!walk_iterate_signs(f, m - 1, ilo, ihi, reversed != down, budget, emit)) return false;
  }
  return true;
}

}  // namespace detail

/// Lap counts of f, f^2, ..., f^n, counted without building the iterates.
/// budget caps the number of pieces visited for each iterate.
inline LapSequence iterate_lap_counts(const PLMap& f, std::size_t n,
                                      std::size_t budget = 1u << 22) {
  if (!f.is_self_map()) throw DomainError("iterate_lap_counts needs a self-map");
  LapSequence out;
  for (std::size_t m = 1; m <= n; ++m) {
    std::size_t laps = 1;
    int last = 0;
    auto emit = [&](int s) {
      if (s == 0) return;
      if (last != 0 && s != last) ++laps;
      last = s;
    };
    std::size_t left = budget;
    if (!detail::walk_iterate_signs(f, m, f.domain().lo, f.domain().hi, false, left, emit)) {
      out.truncated = true;
      break;
    }
    out.laps.push_back(laps);
  }
  return out;
}

/// f^n for a self-map.
inline PLMap iterate(const PLMap& f, std::size_t n,
                     std::size_t budget = static_cast<std::size_t>(-1)) {
  if (n == 0) return PLMap::identity(f.domain());
  PLMap power = f;
  for (std::size_t i = 1; i < n; ++i) power = compose(f, power, budget);
  return power;
}

struct FixedSet {
  std::vector<Rational> points;      // isolated solutions of f(x) = x
  std::vector<Interval> intervals;   // pieces lying on the diagonal
};

/// Solutions of m(x) = x for a PL map whose domain and codomain overlap.
inline FixedSet fixed_set(const PLMap& m) {
  FixedSet out;
  const auto& xs = m.xs();
  const auto& ys = m.ys();
  auto push_point = [&](const Rational& x) {
    if (!out.points.empty() && out.points.back() == x) return;
    if (!out.intervals.empty() && out.intervals.back().contains(x)) return;
    out.points.push_back(x);
  };
  for (std::size_t i = 0; i < m.piece_count(); ++i) {
    Rational d0 = ys[i] - xs[i];
    Rational d1 = ys[i + 1] - xs[i + 1];
    if (d0 == 0 && d1 == 0) {
      if (!out.points.empty() && out.points.back() == xs[i]) out.points.pop_back();
      if (!out.intervals.empty() && out.intervals.back().hi == xs[i])
        out.intervals.back().hi = xs[i + 1];
      else
        out.intervals.emplace_back(xs[i], xs[i + 1]);
    } else if (d0 == 0) {
      push_point(xs[i]);
    } else if (d1 == 0) {
      push_point(xs[i + 1]);
    } else if (sgn(d0) != sgn(d1)) {
      push_point(xs[i] + d0 * (xs[i + 1] - xs[i]) / (d0 - d1));
    }
  }
  return out;
}

/// All points fixed by f^n, solved piece by piece on the exact composition.
inline FixedSet periodic_points(const PLMap& f, std::size_t n,
                                std::size_t budget = 1u << 22) {
  if (n == 0) throw ParameterError("period must be >= 1");
  if (!f.is_self_map()) throw DomainError("periodic_points needs a self-map");
  return fixed_set(iterate(f, n, budget));
}

/// Tent map with k full branches, slopes alternating from +k, fixing 0.
inline PLMap tent_map(long k) {
  if (k < 2) throw ParameterError("tent_map needs k >= 2");
  std::vector<Rational> xs, ys;
  for (long i = 0; i <= k; ++i) {
    xs.push_back(rational(i, k));
    ys.push_back(i % 2 == 0 ? 0 : 1);
  }
  return PLMap(std::move(xs), std::move(ys), Interval(0, 1));
}

enum class PieceKind { keep, collapse };

struct CollapsePiece {
  Interval span;
  PieceKind kind;
};

/// Monotone map with slope 1 on keep pieces and 0 on collapse pieces.
inline PLMap collapse_map(const std::vector<CollapsePiece>& pieces,
                          std::optional<Rational> target_start = std::nullopt) {
  if (pieces.empty()) throw ConstructionError("collapse_map needs pieces");
  std::vector<Rational> xs{pieces.front().span.lo};
  std::vector<Rational> ys{target_start.value_or(pieces.front().span.lo)};
  for (const auto& p : pieces) {
    if (p.span.lo != xs.back() || p.span.degenerate())
      throw ConstructionError("collapse pieces must partition the domain");
    ys.push_back(ys.back() + (p.kind == PieceKind::keep ? p.span.length() : Rational(0)));
    xs.push_back(p.span.hi);
  }
  return PLMap(std::move(xs), std::move(ys));
}

inline void write_csv(std::ostream& os, const PLMap& f) {
  os << "x,y,x_exact,y_exact\n";
  for (std::size_t i = 0; i < f.xs().size(); ++i)
    os << f.xs()[i].get_d() << ',' << f.ys()[i].get_d() << ',' << f.xs()[i]
       << ',' << f.ys()[i] << '\n';
}

}  // namespace lel
