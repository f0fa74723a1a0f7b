#pragma once

// Verification suites. Interval dynamics are checked exactly on the model
// factor f'; family inequalities use the limit brackets of lel_system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lel/error.hpp"
#include "lel/lel_system.hpp"
#include "lel/metric_graph.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"
#include "lel/rng.hpp"
#include "lel/spaces.hpp"
#include "lel/tower.hpp"

namespace lel {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// fail beats inconclusive beats pass.
inline Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) { return v == Verdict::fail ? 2 : v == Verdict::inconclusive ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

// ---------------------------------------------------------------- exactness

/// ceil(log(1/(gamma eps)) / log rho) + 2, computed exactly.
inline std::size_t exactness_step_bound(const Rational& gamma, const Rational& rho, const Rational& eps) {
  if (rho <= 1 || gamma <= 0 || eps <= 0) throw ParameterError("step bound needs rho > 1, gamma, eps > 0");
  Rational target = 1 / (gamma * eps);
  std::size_t n = 0;
  for (Rational p = 1; p < target; p *= rho) ++n;
  return n + 2;
}

struct ExactnessReport {
  Rational eps;
  std::size_t intervals = 0;
  std::size_t max_steps = 0;
  std::size_t bound = 0;
  std::vector<std::size_t> histogram;  // histogram[n] = intervals needing n steps
  std::optional<Interval> witness;     // first interval over the bound
  Verdict verdict = Verdict::pass;
};

/// Iterates every [j eps, (j+1) eps] until it covers the domain.
inline ExactnessReport check_exactness(const PLMap& f, const Rational& eps, std::size_t bound) {
  if (!f.is_self_map()) throw DomainError("check_exactness needs a self-map");
  const Interval dom = f.domain();
  if (eps <= 0 || eps > dom.length()) throw ParameterError("eps must lie in (0, |I|]");
  ExactnessReport r;
  r.eps = eps;
  r.bound = bound;
  r.histogram.assign(bound + 1, 0);
  Integer count = ceil(Rational(dom.length() / eps));
  for (Integer j = 0; j < count; ++j) {
    Rational lo = dom.lo + Rational(j, Integer(1)) * eps;
    Interval J(lo, min(dom.hi, Rational(lo + eps)));
    Interval cur = J;
    std::size_t n = 0;
    while (!(cur == dom) && n <= bound) {
      cur = image_interval(f, cur);
      ++n;
    }
    ++r.intervals;
    if (n > bound) {
      r.verdict = Verdict::fail;
      if (!r.witness) r.witness = J;
      r.max_steps = std::max(r.max_steps, n);
      continue;
    }
    ++r.histogram[n];
    r.max_steps = std::max(r.max_steps, n);
  }
  while (r.histogram.size() > 1 && r.histogram.back() == 0) r.histogram.pop_back();
  return r;
}

// ------------------------------------------------------- periodic points

struct PeriodicReport {
  Rational eps;
  std::size_t n_max = 0;
  std::size_t grid_points = 0;
  std::vector<std::size_t> covered_at;   // covered_at[n-1] = grid points first covered at period n
  std::vector<Rational> uncovered;
  std::size_t period_one_points = 0;
  std::vector<std::pair<Rational, std::size_t>> samples;  // (point, period)
  bool budget_hit = false;
  Verdict verdict = Verdict::pass;
};

namespace detail {

inline bool near_fixed(const FixedSet& s, const Rational& y, const Rational& eps) {
  auto it = std::lower_bound(s.points.begin(), s.points.end(), y - eps);
  if (it != s.points.end() && *it <= y + eps) return true;
  for (const auto& iv : s.intervals)
    if (iv.lo <= y + eps && y - eps <= iv.hi) return true;
  return false;
}

inline std::optional<Rational> any_point(const FixedSet& s) {
  if (!s.points.empty()) return s.points.front();
  if (!s.intervals.empty()) return s.intervals.front().lo;
  return std::nullopt;
}

}  // namespace detail

/// Every grid point k eps gets a periodic point within eps. Period 1 is
/// solved globally; higher periods on the window around each uncovered point.
inline PeriodicReport check_dense_periodic(const PLMap& f, const Rational& eps, std::size_t n_max,
                                           std::size_t budget = 1u << 20) {
  if (!f.is_self_map()) throw DomainError("check_dense_periodic needs a self-map");
  if (n_max < 1) throw ParameterError("n_max must be >= 1");
  const Interval dom = f.domain();
  PeriodicReport r;
  r.eps = eps;
  r.n_max = n_max;
  r.covered_at.assign(n_max, 0);
  FixedSet ones = fixed_set(f);
  r.period_one_points = ones.points.size() + ones.intervals.size();
  if (auto p = detail::any_point(ones)) r.samples.emplace_back(*p, 1);
  Integer count = floor(Rational(dom.length() / eps));
  for (Integer j = 0; j <= count; ++j) {
    Rational y = dom.lo + Rational(j, Integer(1)) * eps;
    ++r.grid_points;
    if (detail::near_fixed(ones, y, eps)) {
      ++r.covered_at[0];
      continue;
    }
    Interval w(max(dom.lo, Rational(y - eps)), min(dom.hi, Rational(y + eps)));
    bool found = false;
    PLMap power = f.restrict(w);
    for (std::size_t n = 2; n <= n_max && !found; ++n) {
      try {
        power = compose(f, power, budget);
      } catch (const ResourceError&) {
        r.budget_hit = true;
        break;
      }
      FixedSet s = fixed_set(power);
      if (detail::near_fixed(s, y, eps)) {
        ++r.covered_at[n - 1];
        found = true;
        if (r.samples.size() < 8)
          if (auto p = detail::any_point(s)) r.samples.emplace_back(*p, n);
      }
    }
    if (!found) r.uncovered.push_back(y);
  }
  if (!r.uncovered.empty()) r.verdict = r.budget_hit ? Verdict::inconclusive : Verdict::fail;
  return r;
}

/// x = phi(t) with (f')^n(t) = t is n-periodic for f = phi o psi.
inline bool exhibit_periodic_in_space(const LelSystem& s, const Rational& t, std::size_t n) {
  GraphPoint x = s.phi_model(t), y = x;
  for (std::size_t i = 0; i < n; ++i) y = s.phi_model(s.psi_model(y));
  return y == x;
}

// ------------------------------------------------------------- entropy

struct EntropyReport {
  std::vector<std::size_t> laps;
  std::vector<double> lap_estimates;   // log(laps(f'^n)) / n
  bool truncated = false;
  double log_lip_upper = 0;            // log of the certified Lip(f)
  double expansion_lower = 0;          // log rho, from the verified expansion
  // Every estimate <= log Lip. Only the limit is bounded by log Lip; finite
  // estimates are upper bounds for the entropy and may exceed it.
  bool estimates_below_lip = true;
  std::optional<double> example_bound;
  Verdict verdict = Verdict::pass;
};

// Rounding slack for comparing double logarithms.
inline constexpr double kLogSlack = 1e-12;

inline EntropyReport entropy_report(const PLMap& f, std::size_t n, const Rational& lip_upper,
                                    const Rational& rho, std::size_t budget = 1u << 22) {
  EntropyReport r;
  auto seq = iterate_lap_counts(f, n, budget);
  r.laps = seq.laps;
  r.truncated = seq.truncated;
  r.log_lip_upper = std::log(lip_upper.get_d());
  r.expansion_lower = std::log(rho.get_d());
  for (std::size_t i = 0; i < r.laps.size(); ++i) {
    double e = std::log(static_cast<double>(r.laps[i])) / static_cast<double>(i + 1);
    r.lap_estimates.push_back(e);
    if (e < r.expansion_lower - kLogSlack) r.verdict = Verdict::fail;
    if (e > r.log_lip_upper + kLogSlack) r.estimates_below_lip = false;
  }
  if (r.laps.empty()) r.verdict = Verdict::inconclusive;
  return r;
}

// --------------------------------------------------------- LEL certificates

/// A map together with how it acts on its source family.
struct LelMapView {
  std::string name;
  Rational rho;
  Rational L;
  std::function<MemberImage(const Interval&)> image;
  Bracket lip;  // model value and certified upper bound
  std::function<std::optional<Rational>(DyadicSampler&)> pair_ratio;
  Rational q = 0;  // tower parameter, for the depth suggestion
};

struct LelReport {
  std::string map;
  Rational rho;
  Rational L;
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t onto = 0;
  std::size_t fails = 0;
  std::size_t inconclusive = 0;
  std::optional<Interval> witness;        // first failing member parameter
  std::optional<Rational> worst_ratio;    // min target.lower / source.upper over non-onto members
  std::size_t suggested_extra_levels = 0;
  Rational lip_certified;                  // certified upper bound on Lip
  Rational lip_sampled;                    // largest sampled model ratio
  std::size_t lip_pairs = 0;
  bool lip_ok = false;
  Verdict verdict = Verdict::pass;

  double inconclusive_rate() const {
    return trials ? static_cast<double>(inconclusive) / static_cast<double>(trials) : 0.0;
  }
};

namespace detail {

inline void judge(LelReport& r, const LelMapView& v, const Interval& k) {
  MemberImage m = v.image(k);
  ++r.trials;
  if (m.onto) {
    ++r.passes;
    ++r.onto;
    return;
  }
  if (m.source.upper > 0) {
    Rational ratio = m.target.lower / m.source.upper;
    if (!r.worst_ratio || ratio < *r.worst_ratio) r.worst_ratio = ratio;
  }
  if (m.target.lower >= v.rho * m.source.upper) {
    ++r.passes;
    return;
  }
  if (!(m.model_onto || m.model_target >= v.rho * m.model_source)) {
    ++r.fails;
    if (!r.witness) r.witness = k;
    return;
  }
  ++r.inconclusive;
  Rational margin = m.model_target - v.rho * m.model_source;
  Rational width = (m.target.upper - m.target.lower) + v.rho * (m.source.upper - m.source.lower);
  if (margin > 0 && width > 0 && v.q > 0 && v.q < 1) {
    double levels = std::ceil(std::log(Rational(width / margin).get_d()) / std::log(1 / v.q.get_d()));
    r.suggested_extra_levels = std::max(r.suggested_extra_levels, static_cast<std::size_t>(std::max(1.0, levels)));
  }
}

inline void finish(LelReport& r, const LelMapView& v, DyadicSampler& rng, std::size_t pairs) {
  r.lip_certified = v.lip.upper;
  r.lip_sampled = 0;
  if (v.pair_ratio)
    for (std::size_t i = 0; i < pairs; ++i)
      if (auto x = v.pair_ratio(rng)) {
        ++r.lip_pairs;
        r.lip_sampled = max(r.lip_sampled, *x);
      }
  r.lip_ok = r.lip_certified <= v.L && r.lip_sampled <= v.lip.upper;
  r.verdict = r.fails ? Verdict::fail : r.inconclusive ? Verdict::inconclusive : Verdict::pass;
  if (!r.lip_ok) r.verdict = Verdict::fail;
}

inline LelReport start(const LelMapView& v) {
  LelReport r;
  r.map = v.name;
  r.rho = v.rho;
  r.L = v.L;
  return r;
}

inline GraphPoint sample_point(const MetricGraph& g, DyadicSampler& rng) {
  std::size_t e = static_cast<std::size_t>(rng.below(g.edge_count()));
  return g.canonical(GraphPoint::on_edge(e, rng.point(Interval(0, g.edge(e).length), 14)));
}

}  // namespace detail

/// Sampled members K of the family, dyadic with up to max_bits bits.
inline LelReport certify_lel(const LelMapView& v, std::uint64_t seed, std::size_t trials,
                             unsigned max_bits = 16, std::size_t pairs = 1000) {
  DyadicSampler rng(seed);
  LelReport r = detail::start(v);
  for (std::size_t i = 0; i < trials; ++i) detail::judge(r, v, rng.interval(Interval(0, 1), max_bits));
  detail::finish(r, v, rng, pairs);
  return r;
}

/// Every [i/D, j/D] with 0 <= i < j <= D.
inline LelReport certify_lel_grid(const LelMapView& v, long denominator, std::uint64_t seed = 1,
                                  std::size_t pairs = 1000) {
  if (denominator < 1) throw ParameterError("denominator must be >= 1");
  LelReport r = detail::start(v);
  for (long i = 0; i < denominator; ++i)
    for (long j = i + 1; j <= denominator; ++j) detail::judge(r, v, Interval(rational(i, denominator), rational(j, denominator)));
  DyadicSampler rng(seed);
  detail::finish(r, v, rng, pairs);
  return r;
}

/// A self-map of I on the family of all closed subintervals.
inline LelMapView interval_view(const PLMap& f, const Rational& rho, const Rational& L, std::string name = "interval") {
  LelMapView v;
  v.name = std::move(name);
  v.rho = rho;
  v.L = L;
  v.image = [f](const Interval& k) {
    Interval y = image_interval(f, k);
    MemberImage m;
    m.source = {k.length(), k.length()};
    m.target = {y.length(), y.length()};
    m.model_source = k.length();
    m.model_target = y.length();
    m.onto = m.model_onto = y == f.codomain();
    return m;
  };
  Rational lip = f.lipschitz();
  v.lip = {lip, lip};
  v.pair_ratio = [f](DyadicSampler& rng) -> std::optional<Rational> {
    Rational x = rng.point(f.domain(), 14), y = rng.point(f.domain(), 14);
    if (x == y) return std::nullopt;
    return Rational(abs(f(x) - f(y)) / abs(x - y));
  };
  return v;
}

inline LelMapView phi_view(std::shared_ptr<const LelSystem> s) {
  LelMapView v;
  v.name = "phi";
  v.rho = s->rho();
  v.L = s->constants().L_rho;
  v.q = s->tower().q();
  v.image = [s](const Interval& k) { return s->phi_image(k); };
  v.lip = s->lip_phi();
  v.pair_ratio = [s](DyadicSampler& rng) -> std::optional<Rational> {
    Rational x = rng.point(Interval(0, 1), 14), y = rng.point(Interval(0, 1), 14);
    if (x == y) return std::nullopt;
    return Rational(s->core().model_distance(s->phi_model(x), s->phi_model(y)) / abs(x - y));
  };
  return v;
}

inline LelMapView psi_view(std::shared_ptr<const LelSystem> s) {
  LelMapView v;
  v.name = "psi";
  v.rho = s->rho();
  v.L = s->constants().L_rho;
  v.q = s->tower().q();
  v.image = [s](const Interval& k) { return s->psi_image(k); };
  v.lip = s->lip_psi();
  v.pair_ratio = [s](DyadicSampler& rng) -> std::optional<Rational> {
    const auto& G = s->core().top().graph;
    GraphPoint x = detail::sample_point(G, rng), y = detail::sample_point(G, rng);
    Rational d = s->core().model_distance(x, y);
    if (d == 0) return std::nullopt;
    return Rational(abs(s->psi_model(x) - s->psi_model(y)) / d);
  };
  return v;
}

inline LelMapView between_view(std::shared_ptr<const BetweenMap> f) {
  LelMapView v;
  v.name = &f->src() == &f->dst() ? "f" : "between";
  v.rho = f->rho();
  v.L = f->lipschitz_constant();
  v.q = f->src().tower().q();
  v.image = [f](const Interval& k) { return f->image(k); };
  v.lip = f->lip();
  v.pair_ratio = [f](DyadicSampler& rng) -> std::optional<Rational> {
    const auto& G = f->src().core().top().graph;
    GraphPoint x = detail::sample_point(G, rng), y = detail::sample_point(G, rng);
    Rational d = f->src().core().model_distance(x, y);
    if (d == 0) return std::nullopt;
    return Rational(f->dst().core().model_distance(f->model(x), f->model(y)) / d);
  };
  return v;
}

// ----------------------------------------------------- family properties

/// gamma |J| <= H^1(phi0 J) <= Gamma |psi0 phi0 J| on sampled J.
struct SandwichReport {
  std::size_t trials = 0;
  std::size_t fails = 0;
  std::size_t inconclusive = 0;
  std::optional<Interval> witness;
  Verdict verdict = Verdict::pass;
};

inline SandwichReport check_sandwich(const LelSystem& s, std::uint64_t seed, std::size_t trials,
                                     unsigned max_bits = 16) {
  const auto& p = s.constants().profile;
  const auto& n = s.core();
  DyadicSampler rng(seed);
  SandwichReport r;
  for (std::size_t i = 0; i < trials; ++i) {
    Interval J = rng.interval(Interval(0, 1), max_bits);
    ++r.trials;
    Bracket h = n.h1_phi0(J);
    IntervalBracket y = n.psi0_phi0(J);
    if (h.lower >= p.gamma * J.length() && h.upper <= p.Gamma * y.inner_length()) continue;
    Rational hm = n.h1_model(J);
    Rational ym = image_interval(n.lambda, J).length();
    if (hm < p.gamma * J.length() || hm > p.Gamma * ym) {
      ++r.fails;
      if (!r.witness) r.witness = J;
    } else {
      ++r.inconclusive;
    }
  }
  r.verdict = r.fails ? Verdict::fail : r.inconclusive ? Verdict::inconclusive : Verdict::pass;
  return r;
}

/// Members phi0([j/M, (j+1)/M]) of H^1 below eps that together cover X.
struct CoveringReport {
  Rational eps;
  long members = 0;
  Rational largest_h1;   // certified upper bound over the members
  bool covers = false;   // the model images cover X_N
  Verdict verdict = Verdict::pass;
};

inline CoveringReport check_covering(const LelSystem& s, const Rational& eps) {
  const auto& n = s.core();
  CoveringReport r;
  r.eps = eps;
  long M = 1;
  while (!(n.lip_phi0().upper / M < eps)) M *= 2;
  r.members = M;
  r.largest_h1 = 0;
  EdgePortionSet all;
  const auto& L = n.top();
  for (long j = 0; j < M; ++j) {
    Interval K(rational(j, M), rational(j + 1, M));
    r.largest_h1 = max(r.largest_h1, n.h1_phi0(K).upper);
    all.add_all(image_of_interval(L.graph, L.g, Interval(n.alpha_n * K.lo, n.alpha_n * K.hi)));
  }
  r.covers = covers_graph(L.graph, all);
  r.verdict = r.covers && r.largest_h1 < eps ? Verdict::pass : Verdict::fail;
  return r;
}

// ------------------------------------------------------- negative example

struct NegativeReport {
  std::size_t p = 0;
  Rational L;
  bool skipped = false;          // p <= L: nothing is forced
  Bracket h1;                    // normalized H^1(X), exactly 1
  Bracket d_ab;                  // normalized d(a,b)
  bool h1_vs_dab = false;        // H^1 >= p d(a,b): exact on the model, consistent on brackets
  Rational psi0_b_model;         // psi0(b) on the model
  Rational psi0_b_upper;         // certified upper bound on the limit psi0(b)
  Rational bound;                // L / p
  bool psi_b_below_one = false;  // psi0(b) <= L/p < 1
  Verdict verdict = Verdict::pass;
};

/// For the chain of p-fold blocks every psi with psi(a) = 0 that is
/// Lipschitz-L has psi(b) <= L d(a,b) <= L H^1/p; checked on our psi0.
inline NegativeReport negative_suite_Xp(std::size_t p, const Rational& L, std::size_t depth = 5,
                                        const Rational& q = rational(1, 128)) {
  NegativeReport r;
  r.p = p;
  r.L = L;
  r.bound = L / Rational(static_cast<long>(p));
  r.skipped = !(Rational(static_cast<long>(p)) > L);
  auto t = std::make_shared<const Tower>(Tower::expand(chain_xp(p, depth), {q, depth}));
  NormalizedCore n = normalize(t);
  r.h1 = n.h1_total();
  r.d_ab = n.d_ab();
  const Rational pp(static_cast<long>(p));
  r.h1_vs_dab = n.c_n >= pp * n.dab_n && n.c.upper >= pp * n.dab.lower;
  GraphPoint b = GraphPoint::at_vertex(n.top().b);
  r.psi0_b_model = n.psi0_model(b);
  // psi0(b) = d(a,b) / beta*.
  r.psi0_b_upper = n.dab.upper / n.beta_star.lower;
  bool lip_ok = n.lip_psi0().upper <= L;
  r.psi_b_below_one = lip_ok && r.psi0_b_upper <= r.bound && r.bound < 1;
  if (r.skipped) return r;
  r.verdict = r.h1_vs_dab && r.psi_b_below_one ? Verdict::pass : Verdict::fail;
  return r;
}

}  // namespace lel
