#pragma once

// Normalized maps phi: I -> X and psi: X -> I built on a tower, with
// limit-space brackets derived from the top level.
//
// Notation: N is the top level, tau the tower tail, s the scale that the
// metric is divided by (H^1(X), or d(a,b) in unit_ab mode). A limit member
// C = phi0(K) has level-N parameter set between shrink(alpha_N K) and
// expand(alpha_N K), each moved by tau.

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lel/admissible_path.hpp"
#include "lel/error.hpp"
#include "lel/metric_graph.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"
#include "lel/spaces.hpp"
#include "lel/tower.hpp"

namespace lel {

struct ConstantsProfile {
  Rational gamma = rational(2, 5);
  Rational Gamma = 25;
  Rational L = 3;
  Rational delta = rational(1, 10);
  Rational q = rational(1, 128);
  Rational rho = 2;
};

/// Throws ParameterError naming the first violated constraint.
inline void validate(const ConstantsProfile& p) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("constants: ") + what);
  };
  need(0 < p.gamma && p.gamma < rational(1, 2), "need 0 < gamma < 1/2");
  need(p.Gamma > 24, "need Gamma > 24");
  need(p.L > 2, "need L > 2");
  need(0 < p.q && p.q < 1, "need 0 < q < 1");
  need(0 < p.delta && p.delta <= rational(1, 2), "need 0 < delta <= 1/2");
  need((1 - p.q) / 2 >= p.gamma, "need (1-q)/2 >= gamma");
  need((1 - 4 * p.q) / 12 >= 2 / p.Gamma, "need (1-4q)/12 >= 2/Gamma");
  need(2 * p.q < p.delta, "need 2q < delta");
  need(2 / (1 - 2 * p.delta) < p.L, "need 2/(1-2 delta) < L");
  need(p.rho > 1, "need rho > 1");
}

struct LelConstants {
  ConstantsProfile profile;
  long k = 0;
  long l = 0;
  Rational L_rho;
};

namespace detail {

inline long smallest_odd_at_least(const Rational& x) {
  Integer c = ceil(x);
  if (c < 3) c = 3;
  if (c % 2 == 0) c += 1;
  if (!c.fits_slong_p()) throw ParameterError("tent order too large");
  return c.get_si();
}

}  // namespace detail

inline LelConstants choose_constants(const Rational& rho, ConstantsProfile p = {}) {
  p.rho = rho;
  validate(p);
  LelConstants c;
  c.k = detail::smallest_odd_at_least(2 * rho / p.gamma);
  c.l = detail::smallest_odd_at_least(2 * p.Gamma * rho);
  c.L_rho = 2 * p.L * rho * (1 + max(p.Gamma, 1 / p.gamma));
  c.profile = std::move(p);
  return c;
}

/// Smallest dyadic r = m/2^bits with r^2 >= rho, for splitting an end-to-end
/// target between the two factors of a composition.
inline Rational per_factor_rho(const Rational& rho, unsigned bits = 10) {
  if (rho <= 1) throw ParameterError("rho must exceed 1");
  Rational scale = pow(Rational(2), bits);
  Integer m = ceil(Rational(Rational(std::sqrt(rho.get_d())) * scale));
  while (Rational(m - 1, 1) * Rational(m - 1, 1) >= rho * scale * scale) m -= 1;
  while (Rational(m, 1) * Rational(m, 1) < rho * scale * scale) m += 1;
  Rational r(m, Integer(1));
  r /= scale;
  return r;
}

/// A set known to contain inner (when present) and to lie inside outer.
struct IntervalBracket {
  std::optional<Interval> inner;
  Interval outer;

  Rational inner_length() const { return inner ? inner->length() : Rational(0); }
  bool exact() const { return inner && *inner == outer; }
};

enum class Scale { unit_length, unit_ab };

/// phi0 = g(alpha t), psi0 = lambda(h)/beta* on the limit of a tower, with
/// the top level as the computable model.
class NormalizedCore {
 public:
  std::shared_ptr<const Tower> tower;
  Scale scale_mode = Scale::unit_length;
  Rational tau;

  // Level-N values and limit brackets, before scaling.
  Rational c_n, alpha_n, beta_n, dab_n;
  Bracket c, alpha, beta, dab;

  // Divisor of the metric and the divisor of h.
  Rational s_n;
  Bracket s;
  bool folded = false;
  Rational beta_star_n;
  Bracket beta_star;

  PLMap height;  // h_N o g_N on [0, alpha_N]
  PLMap lambda;  // psi0 o phi0 on the model, I -> I

  const TowerLevel& top() const { return tower->top(); }

  /// Normalized H^1(X): exactly 1 in unit_length mode.
  Bracket h1_total() const {
    if (scale_mode == Scale::unit_length) return {c_n / (c_n + tau), 1};
    return {c_n / s.upper, c.upper / s.lower};
  }

  Bracket d_ab() const {
    if (scale_mode == Scale::unit_ab) return {dab_n / (dab_n + tau), 1};
    return {dab_n / s.upper, dab.upper / s.lower};
  }

  /// Lipschitz constants of phi0 and psi0: model value and certified upper bound.
  Bracket lip_phi0() const { return {alpha_n / s_n, alpha.upper / s.lower}; }
  Bracket lip_psi0() const { return {s_n / beta_star_n, s.upper / beta_star.lower}; }

  std::optional<Interval> shrink(const Interval& j) const {
    Rational lo = alpha_n * j.lo + tau, hi = alpha_n * j.hi - tau;
    if (hi < lo) return std::nullopt;
    return Interval(lo, hi);
  }

  Interval expand(const Interval& j) const {
    return {max(Rational(0), Rational(alpha_n * j.lo - tau)), min(alpha_n, Rational(alpha_n * j.hi + tau))};
  }

  Rational h1_model(const Interval& j) const {
    const auto& L = top();
    return h1_length(L.graph, image_of_interval(L.graph, L.g, Interval(alpha_n * j.lo, alpha_n * j.hi))) / s_n;
  }

  /// Normalized H^1(phi0(J)).
  Bracket h1_phi0(const Interval& j) const {
    if (tau == 0) {
      Rational m = h1_model(j);
      return {m, m};
    }
    const auto& L = top();
    auto in = shrink(j);
    Rational lo = in ? h1_length(L.graph, image_of_interval(L.graph, L.g, *in)) : Rational(0);
    Rational hi = h1_length(L.graph, image_of_interval(L.graph, L.g, expand(j))) + tau;
    return {lo / s.upper, min(Rational(hi / s.lower), h1_total().upper)};
  }

  /// psi0(phi0(J)) for J inside the inner and outer parameter sets.
  IntervalBracket psi0_phi0(const IntervalBracket& j) const {
    if (tau == 0) {
      IntervalBracket out{std::nullopt, image_interval(lambda, j.outer)};
      if (j.inner) out.inner = image_interval(lambda, *j.inner);
      return out;
    }
    IntervalBracket out{std::nullopt, Interval(0, 1)};
    // h over the limit member.
    Interval ho = image_interval(height, expand(j.outer));
    ho.hi += tau;
    std::optional<Interval> hi_in;
    if (j.inner)
      if (auto in = shrink(*j.inner)) {
        Interval hin = image_interval(height, *in);
        if (hin.lo + tau <= hin.hi) hi_in = Interval(hin.lo + tau, hin.hi);
      }
    // Fold with a bracketed turning point.
    Interval lo_o = ho, lo_i = hi_in.value_or(Interval(0, 0));
    if (folded) {
      lo_o = {fold_min(ho, dab.lower), fold_max(ho, dab.upper)};
      if (hi_in) {
        Rational a = fold_min(*hi_in, dab.upper), b = fold_max(*hi_in, dab.lower);
        if (a <= b)
          lo_i = {a, b};
        else
          hi_in.reset();
      }
    }
    out.outer = {max(Rational(0), Rational(lo_o.lo / beta_star.upper)),
                 min(Rational(1), Rational(lo_o.hi / beta_star.lower))};
    if (hi_in) {
      Rational a = lo_i.lo / beta_star.lower, b = lo_i.hi / beta_star.upper;
      if (a <= b) out.inner = Interval(max(Rational(0), a), min(Rational(1), b));
    }
    return out;
  }

  IntervalBracket psi0_phi0(const Interval& j) const { return psi0_phi0(IntervalBracket{j, j}); }

  GraphPoint phi0_model(const Rational& t) const {
    return evaluate(top().graph, top().g, alpha_n * t);
  }

  Rational psi0_model(const GraphPoint& x) const {
    Rational h = distance(top().graph, GraphPoint::at_vertex(top().a), x);
    if (folded && h > dab_n) h = 2 * dab_n - h;
    return h / beta_star_n;
  }

  Rational model_distance(const GraphPoint& x, const GraphPoint& y) const {
    return distance(top().graph, x, y) / s_n;
  }

  /// Upper bound on |psi0 o phi0 - lambda| over I.
  Rational lambda_error() const {
    if (tau == 0) return 0;
    return (folded ? 5 : 3) * tau / beta_star.lower;
  }

 private:
  static Rational fold_at(const Rational& x, const Rational& b) {
    return x <= b ? x : Rational(2 * b - x);
  }
  static Rational fold_min(const Interval& v, const Rational& b) {
    return min(fold_at(v.lo, b), fold_at(v.hi, b));
  }
  static Rational fold_max(const Interval& v, const Rational& b) {
    if (v.hi <= b) return v.hi;
    if (v.lo >= b) return fold_at(v.lo, b);
    return b;
  }
};

/// Bracketed phi0, psi0 on the limit of a tower, metric divided by H^1(X)
/// or, in unit_ab mode, by d(a,b).
inline NormalizedCore normalize(std::shared_ptr<const Tower> t, Scale mode = Scale::unit_length) {
  if (!t) throw DomainError("normalize: no tower");
  const TowerLevel& L = t->top();
  if (mode == Scale::unit_ab && L.a == L.b) throw DomainError("unit_ab scale needs a != b");
  auto ab = t->alpha_beta();
  Rational tau = t->tail();
  Rational dab = L.graph.vertex_distance(L.a, L.b);
  PLMap height = height_profile(L.graph, L.g, GraphPoint::at_vertex(L.a));
  if (ab.h1_n <= 0) throw DomainError("normalize: degenerate tower");
  NormalizedCore n{t,
                   mode,
                   tau,
                   ab.h1_n,
                   ab.alpha_n,
                   ab.beta_n,
                   dab,
                   ab.h1,
                   ab.alpha,
                   ab.beta,
                   {dab, dab + tau},
                   mode == Scale::unit_length ? ab.h1_n : dab,
                   mode == Scale::unit_length ? ab.h1 : Bracket{dab, dab + tau},
                   false,
                   ab.beta_n,
                   ab.beta,
                   height,
                   PLMap::identity(Interval(0, 1))};
  PLMap stretch = PLMap::affine(Interval(0, 1), n.alpha_n, 0);
  n.lambda = compose(PLMap::affine(Interval(0, n.beta_n), 1 / n.beta_n, 0), compose(height, stretch))
                 .with_codomain(Interval(0, 1));
  return n;
}

/// Replaces h by lambda o h with turning point d(a,b), so that b maps to 1.
inline NormalizedCore fold_h(NormalizedCore n) {
  if (n.folded) return n;
  if (!n.tower->cut()) throw ParameterError("fold_h needs the cut flag");
  if (!(2 * n.dab.lower > n.beta.upper))
    throw InconclusiveError("fold_h: d(a,b) > beta/2 not certified; raise the depth");
  n.folded = true;
  n.beta_star_n = n.dab_n;
  n.beta_star = n.dab;
  std::vector<Rational> xs{0}, ys{0};
  if (n.dab_n < n.beta_n) {
    xs.push_back(n.dab_n);
    ys.push_back(n.dab_n);
  }
  xs.push_back(n.beta_n);
  ys.push_back(n.dab_n < n.beta_n ? Rational(2 * n.dab_n - n.beta_n) : n.beta_n);
  PLMap fold(std::move(xs), std::move(ys));
  PLMap stretch = PLMap::affine(Interval(0, 1), n.alpha_n, 0);
  n.lambda = compose(PLMap::affine(fold.codomain(), 1 / n.dab_n, 0),
                     compose(fold, compose(n.height, stretch)))
                 .with_codomain(Interval(0, 1));
  return n;
}

/// Image data of one family member under a map.
struct MemberImage {
  Bracket source;   // measure of the member
  Bracket target;   // measure of its image
  bool onto = false;
  Rational model_source;
  Rational model_target;
  bool model_onto = false;
};

struct EndpointReport {
  bool phi_0_is_a = false;
  bool phi_1_is_b = false;
  bool psi_a_is_0 = false;
  std::optional<bool> psi_b_is_1;
  Bracket d_ab;
  std::optional<bool> d_ab_above_half;  // certified by the lower bound
  bool ok() const {
    return phi_0_is_a && phi_1_is_b && psi_a_is_0 && psi_b_is_1.value_or(true) &&
           d_ab_above_half.value_or(true);
  }
};

/// Post-conditions of the normalization, each certified on the brackets.
/// alpha_in_range is informational: g_n runs through the replacement graph
/// once per visit, so alpha_N can exceed 2 H^1(X_N) when a visit count is >= 2.
struct NormalizationChecks {
  bool h1_in_range = false;      // H^1 in [1 - delta, 1] before scaling
  bool alpha_in_range = false;   // H^1 <= alpha <= 2 H^1
  bool beta_in_range = false;    // (1/2 - delta) H^1 <= beta <= H^1
  bool lip_phi0 = false;         // alpha / s < L
  bool lip_psi0 = false;         // s / beta* < L
  bool required() const { return h1_in_range && beta_in_range && lip_phi0 && lip_psi0; }
};

class LelSystem {
 public:
  LelSystem(NormalizedCore core, LelConstants constants)
      : core_(std::move(core)),
        constants_(std::move(constants)),
        fk_(tent_map(constants_.k)),
        fl_(tent_map(constants_.l)),
        factor_(compose(fl_, compose(core_.lambda, fk_))) {}

  const NormalizedCore& core() const { return core_; }
  const LelConstants& constants() const { return constants_; }
  const Tower& tower() const { return *core_.tower; }
  const Rational& rho() const { return constants_.profile.rho; }
  const PLMap& f_k() const { return fk_; }
  const PLMap& f_l() const { return fl_; }

  /// f' = psi o phi on the model, and the sup distance to the limit factor.
  const PLMap& interval_factor() const { return factor_; }
  Rational factor_error() const { return constants_.l * core_.lambda_error(); }

  GraphPoint phi_model(const Rational& t) const { return core_.phi0_model(fk_(t)); }
  Rational psi_model(const GraphPoint& x) const { return fl_(core_.psi0_model(x)); }

  Bracket lip_phi() const {
    Bracket b = core_.lip_phi0();
    return {constants_.k * b.lower, constants_.k * b.upper};
  }
  Bracket lip_psi() const {
    Bracket b = core_.lip_psi0();
    return {constants_.l * b.lower, constants_.l * b.upper};
  }

  /// psi(phi0(J)) as an interval bracket.
  IntervalBracket psi_of_member(const IntervalBracket& j) const {
    IntervalBracket p = core_.psi0_phi0(j);
    IntervalBracket out{std::nullopt, image_interval(fl_, p.outer)};
    if (p.inner) out.inner = image_interval(fl_, *p.inner);
    return out;
  }

  /// The member phi(K) = phi0(f_k K) written as phi0 of a parameter interval.
  Interval phi_parameters(const Interval& k) const { return image_interval(fk_, k); }

  MemberImage phi_image(const Interval& k) const {
    Interval j = phi_parameters(k);
    MemberImage m;
    m.source = {k.length(), k.length()};
    m.model_source = k.length();
    m.target = core_.h1_phi0(j);
    m.model_target = core_.h1_model(j);
    m.onto = j == Interval(0, 1) || m.target.lower >= core_.h1_total().upper;
    m.model_onto = j == Interval(0, 1) || m.model_target == core_.c_n / core_.s_n;
    return m;
  }

  MemberImage psi_image(const Interval& k) const {
    MemberImage m;
    m.source = core_.h1_phi0(k);
    m.model_source = core_.h1_model(k);
    IntervalBracket p = psi_of_member(IntervalBracket{k, k});
    m.target = {p.inner_length(), p.outer.length()};
    m.onto = p.inner && *p.inner == Interval(0, 1);
    Interval model = image_interval(fl_, image_interval(core_.lambda, k));
    m.model_target = model.length();
    m.model_onto = model == Interval(0, 1);
    return m;
  }

  EndpointReport endpoints() const {
    const auto& L = core_.top();
    EndpointReport r;
    GraphPoint a = GraphPoint::at_vertex(L.a), b = GraphPoint::at_vertex(L.b);
    r.phi_0_is_a = constants_.k % 2 == 1 && phi_model(0) == a;
    r.phi_1_is_b = constants_.k % 2 == 1 && phi_model(1) == b;
    r.psi_a_is_0 = psi_model(a) == 0;
    r.d_ab = core_.d_ab();
    if (core_.folded) {
      r.psi_b_is_1 = constants_.l % 2 == 1 && psi_model(b) == 1;
      r.d_ab_above_half = r.d_ab.lower > rational(1, 2);
    }
    return r;
  }

  NormalizationChecks checks() const {
    const auto& p = constants_.profile;
    const auto& n = core_;
    NormalizationChecks c;
    c.h1_in_range = n.c.lower >= 1 - p.delta && n.c.upper <= 1;
    c.alpha_in_range = n.alpha_n >= n.c_n && n.alpha_n <= 2 * n.c_n;
    c.beta_in_range = n.beta.lower >= (rational(1, 2) - p.delta) * n.c.upper && n.beta_n <= n.c_n;
    c.lip_phi0 = n.lip_phi0().upper < p.L;
    c.lip_psi0 = n.lip_psi0().upper < p.L;
    return c;
  }

 private:
  NormalizedCore core_;
  LelConstants constants_;
  PLMap fk_;
  PLMap fl_;
  PLMap factor_;
};

struct LelOptions {
  Scale scale = Scale::unit_length;
  std::optional<bool> fold;  // default: fold exactly when the blueprint has a cut edge
};

inline LelSystem build_phi_psi(NormalizedCore core, const LelConstants& c) {
  return LelSystem(std::move(core), c);
}

inline LelSystem assemble(std::shared_ptr<const Tower> t, const LelConstants& c, const LelOptions& opt = {}) {
  NormalizedCore core = normalize(std::move(t), opt.scale);
  if (opt.fold.value_or(core.tower->cut())) core = fold_h(std::move(core));
  return build_phi_psi(std::move(core), c);
}

/// f = phi' o psi from one system to another.
class BetweenMap {
 public:
  BetweenMap(std::shared_ptr<const LelSystem> src, std::shared_ptr<const LelSystem> dst)
      : src_(std::move(src)), dst_(std::move(dst)) {
    if (!src_ || !dst_) throw ParameterError("between-map needs two systems");
    if (src_->rho() != dst_->rho()) throw ParameterError("between-map: systems use different rho");
  }

  const LelSystem& src() const { return *src_; }
  const LelSystem& dst() const { return *dst_; }

  /// Constants from the composition of two LEL maps.
  Rational rho() const { return src_->rho() * dst_->rho(); }
  Rational lipschitz_constant() const { return src_->constants().L_rho * dst_->constants().L_rho; }

  Bracket lip() const {
    Bracket a = src_->lip_psi(), b = dst_->lip_phi();
    return {a.lower * b.lower, a.upper * b.upper};
  }

  GraphPoint model(const GraphPoint& x) const { return dst_->phi_model(src_->psi_model(x)); }

  /// Image of the member phi0(K) of the source family.
  MemberImage image(const Interval& k) const {
    MemberImage m;
    m.source = src_->core().h1_phi0(k);
    m.model_source = src_->core().h1_model(k);
    IntervalBracket p = src_->psi_of_member(IntervalBracket{k, k});
    Interval j_out = dst_->phi_parameters(p.outer);
    Rational hi = dst_->core().h1_phi0(j_out).upper;
    Rational lo = 0;
    if (p.inner) {
      Interval j_in = dst_->phi_parameters(*p.inner);
      lo = dst_->core().h1_phi0(j_in).lower;
      m.onto = j_in == Interval(0, 1) || lo >= dst_->core().h1_total().upper;
    }
    m.target = {lo, hi};
    Interval jm = dst_->phi_parameters(image_interval(src_->f_l(), image_interval(src_->core().lambda, k)));
    m.model_target = dst_->core().h1_model(jm);
    m.model_onto = jm == Interval(0, 1) || m.model_target == dst_->core().c_n / dst_->core().s_n;
    return m;
  }

  bool maps_a_to_a() const {
    return model(GraphPoint::at_vertex(src_->core().top().a)) ==
           GraphPoint::at_vertex(dst_->core().top().a);
  }

  /// Only promised when the source is folded.
  std::optional<bool> maps_b_to_b() const {
    if (!src_->core().folded) return std::nullopt;
    return model(GraphPoint::at_vertex(src_->core().top().b)) ==
           GraphPoint::at_vertex(dst_->core().top().b);
  }

 private:
  std::shared_ptr<const LelSystem> src_;
  std::shared_ptr<const LelSystem> dst_;
};

inline BetweenMap lel_between(std::shared_ptr<const LelSystem> src, std::shared_ptr<const LelSystem> dst) {
  return BetweenMap(std::move(src), std::move(dst));
}

/// f = phi o psi on one space; its interval factor is the system's f'.
inline BetweenMap self_map(std::shared_ptr<const LelSystem> s) { return BetweenMap(s, s); }

/// Disjoint union with f cycling the components through between-maps.
class UnionSystem {
 public:
  explicit UnionSystem(std::vector<std::shared_ptr<const LelSystem>> systems)
      : systems_(std::move(systems)) {
    if (systems_.empty()) throw ParameterError("union needs at least one system");
    for (std::size_t i = 0; i < systems_.size(); ++i)
      maps_.emplace_back(systems_[i], systems_[(i + 1) % systems_.size()]);
  }

  std::size_t size() const { return systems_.size(); }
  const LelSystem& component(std::size_t i) const { return *systems_.at(i); }
  const BetweenMap& map(std::size_t i) const { return maps_.at(i); }
  std::size_t image_component(std::size_t i) const { return (i + 1) % size(); }
  static Rational cross_distance() { return 2; }

  /// Diameter of component i; at most 1 keeps the union metric compatible.
  Bracket diameter(std::size_t i) const {
    const auto& n = component(i).core();
    const auto& G = n.top().graph;
    Rational d = lel::diameter(G, full_portion_set(G));
    return {d / n.s.upper, min(Rational((d + n.tau) / n.s.lower), n.h1_total().upper)};
  }

  /// Image of the member phi0_i(K) under the return map f^size on component i.
  MemberImage return_image(std::size_t i, const Interval& k) const {
    const std::size_t m = size();
    const LelSystem& first = component(i);
    MemberImage out;
    out.source = first.core().h1_phi0(k);
    out.model_source = first.core().h1_model(k);
    IntervalBracket p = first.psi_of_member(IntervalBracket{k, k});
    Interval model = image_interval(first.f_l(), image_interval(first.core().lambda, k));
    for (std::size_t step = 1; step < m; ++step) {
      const LelSystem& s = component((i + step) % m);
      IntervalBracket j{std::nullopt, s.phi_parameters(p.outer)};
      if (p.inner) j.inner = s.phi_parameters(*p.inner);
      p = s.psi_of_member(j);
      model = image_interval(s.f_l(), image_interval(s.core().lambda, s.phi_parameters(model)));
    }
    const LelSystem& last = first;
    Interval j_out = last.phi_parameters(p.outer);
    out.target.upper = last.core().h1_phi0(j_out).upper;
    if (p.inner) {
      Interval j_in = last.phi_parameters(*p.inner);
      out.target.lower = last.core().h1_phi0(j_in).lower;
      out.onto = j_in == Interval(0, 1) || out.target.lower >= last.core().h1_total().upper;
    }
    Interval jm = last.phi_parameters(model);
    out.model_target = last.core().h1_model(jm);
    out.model_onto = jm == Interval(0, 1) || out.model_target == last.core().c_n / last.core().s_n;
    return out;
  }

  /// Expansion and Lipschitz constants of the return map.
  Rational return_rho() const {
    Rational r = 1;
    for (const auto& f : maps_) r *= f.rho();
    return r;
  }

  /// Return-map point image on the models.
  GraphPoint return_model(std::size_t i, GraphPoint x) const {
    for (std::size_t step = 0; step < size(); ++step) x = maps_[(i + step) % size()].model(x);
    return x;
  }

 private:
  std::vector<std::shared_ptr<const LelSystem>> systems_;
  std::vector<BetweenMap> maps_;
};

inline UnionSystem union_devaney(std::vector<std::shared_ptr<const LelSystem>> systems) {
  return UnionSystem(std::move(systems));
}

/// (2/k) log L: entropy bound of the omega-star example.
inline double small_entropy_bound(long k, const Rational& L) {
  if (k < 2) throw ParameterError("example needs k >= 2");
  return 2.0 / static_cast<double>(k) * std::log(L.get_d());
}

/// The omega-star example: A_1..A_{k-1} unit arcs at the branch point a,
/// Y the remaining edges; isometries A_i -> A_{i+1}, between-maps
/// A_{k-1} -> Y and Y -> A_1, all fixing a.
struct OmegaExample {
  long k = 0;
  std::shared_ptr<const LelSystem> arc;
  std::shared_ptr<const LelSystem> tail;
  BetweenMap into_tail;   // A_{k-1} -> Y
  BetweenMap out_of_tail; // Y -> A_1
  Rational L_between;     // Lipschitz constant of each between-map
  double entropy_bound = 0;

  /// f^k restricted to Y, on the model.
  GraphPoint return_model(const GraphPoint& y) const { return into_tail.model(out_of_tail.model(y)); }
  bool fixes_a() const { return into_tail.maps_a_to_a() && out_of_tail.maps_a_to_a(); }
};

inline OmegaExample omega_star_small_entropy(long k, const LelConstants& c, std::size_t depth = 5) {
  if (k < 2) throw ParameterError("example needs k >= 2");
  GraphSpec unit{{"a", "e"}, {{"arc", "a", "e", std::nullopt}}};
  TowerOptions opt{c.profile.q, depth};
  auto arc_tower = std::make_shared<const Tower>(
      Tower::expand(graph_blueprint(unit, "a", "e", std::nullopt, "arc"), opt));
  auto y_tower = std::make_shared<const Tower>(Tower::expand(omega_star(depth, OmegaEndpoints::hub), opt));
  auto arc = std::make_shared<const LelSystem>(assemble(arc_tower, c));
  auto tail = std::make_shared<const LelSystem>(assemble(y_tower, c));
  BetweenMap in(arc, tail), out(tail, arc);
  Rational L = in.lipschitz_constant();
  return OmegaExample{k, arc, tail, in, out, L, small_entropy_bound(k, L)};
}

}  // namespace lel
