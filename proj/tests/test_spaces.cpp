#include <catch_amalgamated.hpp>

#include "lel/spaces.hpp"
#include "lel/tower.hpp"

using namespace lel;

TEST_CASE("stars", "[spaces]") {
  auto arc = star(2);
  auto g = graph_from_spec(arc.base);
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(*g.find_vertex("hub")) == 2);
  auto s3 = star(3, 1, 2, true);
  CHECK(s3.cut_edge == std::optional<std::string>("e1"));
  CHECK(s3.a == "l1");
  CHECK(s3.b == "l2");
  Tower t = Tower::expand(s3);
  CHECK(t.top().graph.total_length() == 1 - t.q());
  CHECK_THROWS_AS(star(1), ParameterError);
  CHECK_THROWS_AS(star(3, 1, 4), ParameterError);
  // Leaf to leaf, every leaf edge separates.
  for (std::size_t a = 1; a <= 4; ++a)
    for (std::size_t b = 1; b <= 4; ++b)
      if (a != b) CHECK_NOTHROW(star(4, a, b, true));
}

TEST_CASE("omega star", "[spaces]") {
  for (auto mode : {OmegaEndpoints::leaves, OmegaEndpoints::hub}) {
    auto bp = omega_star(6, mode);
    CHECK_FALSE(bp.cut_edge);
    CHECK_FALSE(bp.complete);
    for (std::size_t N = 1; N <= 6; ++N) {
      Tower t = Tower::expand(bp, {rational(1, 128), N});
      CHECK(t.top().graph.edge_count() == N + 1);
      CHECK(t.top().graph.vertex_count() == N + 2);
      if (mode == OmegaEndpoints::hub) CHECK(t.top().a == t.top().b);
    }
  }
}

TEST_CASE("chains of parallel blocks", "[spaces]") {
  for (std::size_t p : {3u, 4u, 5u}) {
    auto bp = chain_xp(p, 1);
    CHECK(bp.depth() == 1);
    CHECK(bp.base.edges.size() == 4 * p);
    auto g = graph_from_spec(bp.base);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto& n = g.vertex_name(v);
      CHECK(g.degree(v) == (n == bp.a || n == bp.b ? p : 2 * p));
    }
    Tower t = Tower::expand(chain_xp(p, 6), {rational(1, 128), 6});
    // Every new block has two vertices of order p.
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto& L = t.level(n);
      const auto& G = L.graph;
      std::size_t in = npos, out = npos;
      for (std::size_t v = 0; v < G.vertex_count(); ++v)
        if (L.new_vertex[v]) (G.vertex_name(v).ends_with("_in") ? in : out) = v;
      REQUIRE(in != npos);
      REQUIRE(out != npos);
      CHECK(G.degree(out) == p);
      CHECK(G.degree(in) == 2 * p);
      CHECK((out == L.a || out == L.b));
    }
  }
  CHECK_THROWS_AS(chain_xp(2), ParameterError);
}

TEST_CASE("every shipped construction expands", "[spaces]") {
  GraphSpec wedge{{"o", "p", "r"}, {{"c1", "o", "p", {}}, {"c2", "p", "o", {}}, {"c3", "o", "r", {}}, {"c4", "r", "o", {}}}};
  GraphSpec tree{{"r", "u", "v", "w"}, {{"t1", "r", "u", {}}, {"t2", "u", "v", {}}, {"t3", "u", "w", {}}}};
  std::vector<TowerBlueprint> all{star(2), star(3, 1, 2, true), star(5, 2, 4), omega_star(6),
                                  omega_star(6, OmegaEndpoints::hub), chain_xp(3, 6), chain_xp(4, 6),
                                  graph_blueprint(wedge, "o", "r"),
                                  graph_blueprint(tree, "r", "v", std::string("t1"))};
  for (const auto& bp : all) {
    INFO(bp.name);
    CHECK_NOTHROW(validate(bp));
    Tower t = Tower::expand(bp, {rational(1, 128), 6});
    CHECK(t.depth() == std::min<std::size_t>(6, bp.depth()));
    CHECK(t.top().graph.total_length() < 1);
  }
}
