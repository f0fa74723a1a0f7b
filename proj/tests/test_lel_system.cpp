#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "lel/lel_system.hpp"
#include "lel/rng.hpp"
#include "lel/spaces.hpp"
#include "oracles.hpp"

using namespace lel;

namespace {

const Rational q = rational(1, 128);

std::shared_ptr<const Tower> build(const TowerBlueprint& bp, std::size_t depth = 5) {
  return std::make_shared<const Tower>(Tower::expand(bp, {q, depth}));
}

std::shared_ptr<const LelSystem> system_for(const TowerBlueprint& bp, const LelConstants& c,
                                            std::size_t depth = 5, LelOptions opt = {}) {
  return std::make_shared<const LelSystem>(assemble(build(bp, depth), c, opt));
}

long brute_odd(const Rational& gamma_half_or_inverse, const Rational& rho) {
  for (long n = 3;; n += 2)
    if (gamma_half_or_inverse * n >= rho) return n;
}

TowerBlueprint arc() {
  GraphSpec g{{"x", "y"}, {{"e", "x", "y", std::nullopt}}};
  return graph_blueprint(g, "x", "y", std::string("e"), "arc");
}

// a -u- b with a branch u -w; proportions 2/5, 1/5, 2/5.
TowerBlueprint branch(const Rational& au, const Rational& ub, const Rational& uw) {
  GraphSpec g{{"a", "u", "b", "w"}, {{"au", "a", "u", au}, {"ub", "u", "b", ub}, {"uw", "u", "w", uw}}};
  return graph_blueprint(g, "a", "b", std::string("au"), "branch");
}

}  // namespace

TEST_CASE("constants", "[lel_system]") {
  auto c = choose_constants(2);
  CHECK(c.k == 11);
  CHECK(c.l == 101);
  CHECK(c.L_rho == 312);
  CHECK(choose_constants(1 + rational(1, 1000)).k == 7);
  ConstantsProfile p;
  for (Rational rho : {Rational(rational(3, 2)), Rational(2), Rational(rational(7, 3)), Rational(5)}) {
    auto cc = choose_constants(rho);
    CHECK(cc.k == brute_odd(p.gamma / 2, rho));
    CHECK(cc.l == brute_odd(1 / (2 * p.Gamma), rho));
    CHECK(cc.L_rho > 1);
    CHECK(cc.k * p.L <= cc.L_rho);
  }
  CHECK_THROWS_AS(choose_constants(1), ParameterError);
  ConstantsProfile bad;
  bad.gamma = rational(1, 2);
  CHECK_THROWS_AS(choose_constants(2, bad), ParameterError);
  bad = {};
  bad.Gamma = 24;
  CHECK_THROWS_AS(choose_constants(2, bad), ParameterError);
  bad = {};
  bad.q = rational(1, 16);
  CHECK_THROWS_AS(choose_constants(2, bad), ParameterError);
  bad = {};
  bad.L = rational(5, 2);
  CHECK_THROWS_AS(choose_constants(2, bad), ParameterError);

  Rational r = per_factor_rho(2);
  CHECK(r * r >= 2);
  CHECK((r - rational(1, 1024)) * (r - rational(1, 1024)) < 2);
  CHECK(per_factor_rho(4) == 2);
}

TEST_CASE("single edge", "[lel_system]") {
  auto c = choose_constants(2);
  NormalizedCore n = normalize(build(arc()));
  CHECK(n.tau == 0);
  CHECK(n.lambda == PLMap::identity(Interval(0, 1)));
  CHECK(n.lip_phi0() == Bracket{1, 1});
  CHECK(n.lip_psi0() == Bracket{1, 1});
  for (int i = 0; i <= 16; ++i) {
    Rational t = rational(i, 16);
    CHECK(n.psi0_model(n.phi0_model(t)) == t);
    CHECK(n.model_distance(GraphPoint::at_vertex(n.top().a), n.phi0_model(t)) == t);
  }
  LelSystem s = build_phi_psi(fold_h(n), c);
  CHECK(s.interval_factor() == compose(tent_map(101), tent_map(11)));
  CHECK(lap_count(s.interval_factor()) == 11 * 101);
  CHECK(s.factor_error() == 0);
}

TEST_CASE("normalization brackets", "[lel_system]") {
  for (std::size_t N : {3u, 5u}) {
    NormalizedCore n = normalize(build(omega_star(8), N));
    REQUIRE(n.tau > 0);
    Bracket h = n.h1_total();
    CHECK(h.contains(1));
    CHECK(h.upper - h.lower <= pow(q, static_cast<unsigned>(N)) / n.c.lower);
    CHECK(n.psi0_model(GraphPoint::at_vertex(n.top().a)) == 0);
    CHECK(n.lambda.domain() == Interval(0, 1));
    CHECK(n.lambda.codomain() == Interval(0, 1));
    CHECK(image_interval(n.lambda, Interval(0, 1)) == Interval(0, 1));
    CHECK(n.lip_phi0().upper <= 2);
    CHECK(n.lip_psi0().upper < 3);
  }
  auto s = system_for(omega_star(8), choose_constants(2));
  CHECK(s->checks().required());
  CHECK(s->checks().alpha_in_range);
  // Hub to hub: every hub visit walks the new edge, so alpha_N > 2 H^1(X_N).
  auto h = system_for(omega_star(8, OmegaEndpoints::hub), choose_constants(2));
  CHECK(h->checks().required());
  CHECK_FALSE(h->checks().alpha_in_range);
  CHECK(h->core().alpha_n < 2 * h->core().c_n + q * h->tower().level(1).mu);
}

TEST_CASE("proposition sandwich on sampled intervals", "[lel_system]") {
  ConstantsProfile p;
  for (const auto& bp : {star(3, 1, 2, true), omega_star(8), chain_xp(3, 5), arc()}) {
    INFO(bp.name);
    NormalizedCore n = normalize(build(bp));
    if (bp.cut_edge) n = fold_h(n);
    DyadicSampler rng(5);
    for (int i = 0; i < 200; ++i) {
      Interval J = rng.interval(Interval(0, 1), 12);
      Bracket h = n.h1_phi0(J);
      IntervalBracket y = n.psi0_phi0(J);
      CHECK(h.lower <= h.upper);
      CHECK(h.lower >= p.gamma * J.length());
      CHECK(h.upper <= p.Gamma * y.inner_length());
      // Model values sit inside the limit brackets.
      CHECK(h.contains(n.h1_model(J)));
      Interval m = image_interval(n.lambda, J);
      CHECK(y.outer.contains(m));
      if (y.inner) CHECK(m.contains(*y.inner));
    }
  }
}

TEST_CASE("endpoint contract", "[lel_system]") {
  auto c = choose_constants(2);
  auto s = system_for(star(3, 1, 2, true), c);
  auto e = s->endpoints();
  CHECK(e.ok());
  CHECK(e.phi_0_is_a);
  CHECK(e.phi_1_is_b);
  CHECK(e.psi_a_is_0);
  REQUIRE(e.psi_b_is_1);
  CHECK(*e.psi_b_is_1);
  CHECK(e.d_ab.lower > rational(1, 2));
  CHECK(s->core().folded);

  for (auto mode : {OmegaEndpoints::leaves, OmegaEndpoints::hub}) {
    auto o = system_for(omega_star(8, mode), c);
    auto eo = o->endpoints();
    CHECK(eo.ok());
    CHECK_FALSE(eo.psi_b_is_1);
  }
  auto ch = system_for(chain_xp(3, 5), c);
  CHECK(ch->endpoints().ok());
}

TEST_CASE("folding h", "[lel_system]") {
  auto bp = branch(rational(2, 5), rational(1, 5), rational(2, 5));
  auto t = build(bp);
  const auto& G = t->top().graph;
  GraphPoint w = GraphPoint::at_vertex(*G.find_vertex("w")), b = GraphPoint::at_vertex(*G.find_vertex("b"));
  NormalizedCore plain = normalize(t);
  CHECK(plain.psi0_model(w) == 1);
  CHECK(plain.psi0_model(b) == rational(3, 4));
  NormalizedCore f = fold_h(plain);
  // beta~ = 3/5 and h(w) = 4/5 fold to 2/5, relative to beta~.
  CHECK(f.psi0_model(w) == rational(2, 3));
  CHECK(f.psi0_model(b) == 1);
  CHECK(f.beta_star_n == f.dab_n);
  // Below the turning point nothing changes.
  GraphPoint u = GraphPoint::at_vertex(*G.find_vertex("u"));
  CHECK(f.psi0_model(u) * f.beta_star_n == plain.psi0_model(u) * plain.beta_star_n);
  // Gamma bound degrades by at most a factor two.
  DyadicSampler rng(9);
  for (int i = 0; i < 200; ++i) {
    Interval J = rng.interval(Interval(0, 1), 10);
    CHECK(2 * image_interval(f.lambda, J).length() * f.beta_star_n >=
          image_interval(plain.lambda, J).length() * plain.beta_star_n);
  }
  CHECK_THROWS_AS(fold_h(normalize(build(branch(rational(1, 10), rational(1, 10), rational(8, 10))))),
                  InconclusiveError);
  CHECK_THROWS_AS(fold_h(normalize(build(omega_star(4)))), ParameterError);
}

TEST_CASE("rescaled to d(a,b) = 1", "[lel_system]") {
  auto c = choose_constants(2);
  auto s = system_for(star(3, 1, 2, true), c, 1, {Scale::unit_ab, std::nullopt});
  CHECK(s->core().d_ab() == Bracket{1, 1});
  CHECK(s->core().h1_total().upper < 1 / (1 - c.profile.delta));
  CHECK(s->endpoints().ok());
  CHECK_THROWS_AS(normalize(build(omega_star(4, OmegaEndpoints::hub)), Scale::unit_ab), DomainError);
}

TEST_CASE("maps and their model Lipschitz constants", "[lel_system]") {
  auto c = choose_constants(2);
  for (const auto& bp : {star(3, 1, 2, true), omega_star(8)}) {
    auto s = system_for(bp, c);
    CHECK(s->lip_phi().upper <= c.L_rho);
    CHECK(s->lip_psi().upper <= c.L_rho);
    const auto& G = s->core().top().graph;
    DyadicSampler rng(3);
    for (int i = 0; i < 200; ++i) {
      Rational x = rng.point(Interval(0, 1), 14), y = rng.point(Interval(0, 1), 14);
      if (x == y) continue;
      CHECK(s->core().model_distance(s->phi_model(x), s->phi_model(y)) <= s->lip_phi().lower * abs(x - y));
      std::size_t e1 = rng.below(G.edge_count()), e2 = rng.below(G.edge_count());
      GraphPoint p = G.canonical(GraphPoint::on_edge(e1, rng.point(Interval(0, G.edge(e1).length))));
      GraphPoint r = G.canonical(GraphPoint::on_edge(e2, rng.point(Interval(0, G.edge(e2).length))));
      Rational d = s->core().model_distance(p, r);
      if (d == 0) continue;
      CHECK(abs(s->psi_model(p) - s->psi_model(r)) <= s->lip_psi().lower * d);
    }
    // f' agrees with the pointwise composition.
    for (int i = 0; i < 50; ++i) {
      Rational t = rng.point(Interval(0, 1), 12);
      CHECK(s->interval_factor()(t) == s->psi_model(s->phi_model(t)));
    }
  }
}

TEST_CASE("between maps", "[lel_system]") {
  auto c = choose_constants(2);
  auto st = system_for(star(3, 1, 2, true), c);
  auto om = system_for(omega_star(8), c);
  auto f = lel_between(st, om);
  CHECK(f.maps_a_to_a());
  REQUIRE(f.maps_b_to_b());
  CHECK(*f.maps_b_to_b());
  CHECK(f.rho() == 4);
  CHECK(f.lipschitz_constant() == 312 * 312);
  CHECK(f.lip().upper <= f.lipschitz_constant());
  CHECK_FALSE(lel_between(om, st).maps_b_to_b());
  CHECK(lel_between(om, st).maps_a_to_a());
  auto other = system_for(star(3, 1, 2, true), choose_constants(3));
  CHECK_THROWS_AS(lel_between(st, other), ParameterError);

  // Self map of the arc: f(C) for C = phi0(K) is phi0(f_k f_l (K)).
  auto a = system_for(arc(), c);
  auto g = self_map(a);
  DyadicSampler rng(1);
  for (int i = 0; i < 100; ++i) {
    Interval K = rng.interval(Interval(0, 1), 12);
    MemberImage m = g.image(K);
    Interval expect = image_interval(a->f_k(), image_interval(a->f_l(), K));
    CHECK(m.target == Bracket{expect.length(), expect.length()});
    CHECK(m.model_target == expect.length());
  }
}

TEST_CASE("finite unions", "[lel_system]") {
  auto c = choose_constants(2);
  auto st = system_for(star(3, 1, 2, true), c);
  auto om = system_for(omega_star(8, OmegaEndpoints::hub), c);
  CHECK_THROWS_AS(union_devaney({}), ParameterError);
  auto one = union_devaney({st});
  auto self = self_map(st);
  DyadicSampler rng(2);
  for (int i = 0; i < 30; ++i) {
    Interval K = rng.interval(Interval(0, 1), 10);
    MemberImage a = one.return_image(0, K), b = self.image(K);
    CHECK(a.target == b.target);
    CHECK(a.model_target == b.model_target);
  }
  auto two = union_devaney({st, om});
  CHECK(two.image_component(0) == 1);
  CHECK(two.image_component(1) == 0);
  CHECK(UnionSystem::cross_distance() == 2);
  CHECK(two.return_rho() == 16);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(two.diameter(i).upper <= 1);
    GraphPoint a = GraphPoint::at_vertex(two.component(i).core().top().a);
    CHECK(two.return_model(i, a) == a);
  }
  for (int i = 0; i < 30; ++i) {
    Interval K = rng.interval(Interval(0, 1), 10);
    MemberImage m = two.return_image(0, K);
    CHECK(m.target.lower <= m.model_target);
    CHECK(m.model_target <= m.target.upper);
    CHECK((m.onto || m.target.lower >= two.return_rho() * m.source.upper));
  }
}

TEST_CASE("omega-star example", "[lel_system]") {
  CHECK(small_entropy_bound(2, 312) == Catch::Approx(std::log(312.0)));
  CHECK(small_entropy_bound(10, 312) == Catch::Approx(std::log(312.0) / 5));
  CHECK_THROWS_AS(small_entropy_bound(1, 312), ParameterError);
  auto c = choose_constants(2);
  auto ex = omega_star_small_entropy(10, c, 4);
  CHECK(ex.fixes_a());
  CHECK(ex.L_between == 312 * 312);
  CHECK(ex.entropy_bound == Catch::Approx(std::log(312.0 * 312.0) / 5));
  const auto& G = ex.tail->core().top().graph;
  DyadicSampler rng(4);
  Rational worst = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t e1 = rng.below(G.edge_count()), e2 = rng.below(G.edge_count());
    GraphPoint p = G.canonical(GraphPoint::on_edge(e1, rng.point(Interval(0, G.edge(e1).length))));
    GraphPoint r = G.canonical(GraphPoint::on_edge(e2, rng.point(Interval(0, G.edge(e2).length))));
    Rational d = ex.tail->core().model_distance(p, r);
    if (d == 0) continue;
    worst = max(worst, Rational(ex.tail->core().model_distance(ex.return_model(p), ex.return_model(r)) / d));
  }
  CHECK(worst > 1);
  CHECK(worst <= ex.L_between * ex.L_between);
}
