#include <catch_amalgamated.hpp>

#include "lel/metric_graph.hpp"
#include "lel/rng.hpp"
#include "oracles.hpp"

using namespace lel;

namespace {

MetricGraph star3() {
  return MetricGraph({"c", "x", "y", "z"},
                     {{"cx", 0, 1, 1}, {"cy", 0, 2, 1}, {"cz", 0, 3, 1}});
}

// Triangle u-v-w with |uv| = 4/7, |vw| = 2/7, |wu| = 1/7.
MetricGraph triangle() {
  return MetricGraph({"u", "v", "w"}, {{"long", 0, 1, rational(4, 7)},
                                       {"mid", 1, 2, rational(2, 7)},
                                       {"short", 2, 0, rational(1, 7)}});
}

MetricGraph random_graph(DyadicSampler& rng, std::size_t vertices, std::size_t extra) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vertices; ++i) names.push_back("v" + std::to_string(i));
  std::vector<EdgeSpec> es;
  for (std::size_t i = 1; i < vertices; ++i)
    es.push_back({"t" + std::to_string(i), rng.below(i), i, rational(1 + long(rng.below(8)), 8)});
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t u = rng.below(vertices), v = rng.below(vertices);
    if (u == v) continue;
    es.push_back({"x" + std::to_string(k), u, v, rational(1 + long(rng.below(8)), 8)});
  }
  return MetricGraph(names, es);
}

GraphPoint random_point(DyadicSampler& rng, const MetricGraph& g) {
  std::size_t e = rng.below(g.edge_count());
  return g.canonical(GraphPoint::on_edge(e, rng.point({0, g.edge(e).length}, 4)));
}

}  // namespace

TEST_CASE("graph construction rules", "[metric_graph]") {
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, {{"l", 0, 0, 1}}), ConstructionError);
  CHECK_THROWS_AS(MetricGraph({"a", "b", "c"}, {{"e", 0, 1, 1}}), ConstructionError);
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, {{"e", 0, 1, 0}}), ConstructionError);
  auto g = star3();
  CHECK(g.total_length() == 3);
  CHECK(g.degree(0) == 3);
  CHECK(g.canonical(GraphPoint::on_edge(0, 0)) == GraphPoint::at_vertex(0));
  CHECK(g.canonical(GraphPoint::on_edge(0, 1)) == GraphPoint::at_vertex(1));
  CHECK_THROWS_AS(g.canonical(GraphPoint::on_edge(0, 2)), DomainError);
}

TEST_CASE("distances", "[metric_graph]") {
  auto g = star3();
  CHECK(distance(g, GraphPoint::at_vertex(1), GraphPoint::at_vertex(2)) == 2);
  CHECK(distance(g, GraphPoint::at_vertex(1), GraphPoint::at_vertex(1)) == 0);
  auto t = triangle();
  CHECK(distance(t, GraphPoint::at_vertex(0), GraphPoint::at_vertex(1)) == rational(3, 7));
  CHECK(distance(t, GraphPoint::on_edge(0, rational(1, 7)), GraphPoint::on_edge(0, rational(3, 7))) ==
        rational(2, 7));
  // Interior points of one edge may be closer around the cycle.
  CHECK(distance(t, GraphPoint::on_edge(0, rational(1, 56)), GraphPoint::on_edge(0, rational(15, 28))) ==
        rational(27, 56));
}

TEST_CASE("midpoints", "[metric_graph]") {
  MetricGraph seg({"p", "q"}, {{"e", 0, 1, 1}});
  CHECK(midpoint(seg, GraphPoint::at_vertex(0), GraphPoint::at_vertex(1)) ==
        GraphPoint::on_edge(0, rational(1, 2)));
  auto g = star3();
  CHECK(midpoint(g, GraphPoint::at_vertex(1), GraphPoint::at_vertex(2)) == GraphPoint::at_vertex(0));
  CHECK_THROWS_AS(midpoint(g, GraphPoint::at_vertex(1), GraphPoint::at_vertex(1)), DomainError);
  // The long edge's endpoints are 3/7 apart via w; the midpoint lies on the
  // 2/7 edge at distance 3/14 from each end.
  auto t = triangle();
  GraphPoint m = midpoint(t, GraphPoint::at_vertex(0), GraphPoint::at_vertex(1));
  CHECK(m == GraphPoint::on_edge(1, rational(3, 14)));
  CHECK(distance(t, GraphPoint::at_vertex(0), m) == rational(3, 14));
  CHECK(distance(t, m, GraphPoint::at_vertex(1)) == rational(3, 14));
}

TEST_CASE("convexity and exactness on random graphs", "[metric_graph]") {
  DyadicSampler rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_graph(rng, 2 + rng.below(5), rng.below(4));
    // Subdivide at the sampled points and compare against Bellman-Ford.
    std::vector<GraphPoint> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(random_point(rng, g));
    std::vector<oracle::WEdge> es;
    std::size_t n = g.vertex_count();
    std::vector<std::size_t> node_of(pts.size());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      std::vector<std::pair<Rational, std::size_t>> cuts{{0, g.edge(e).u}, {g.edge(e).length, g.edge(e).v}};
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (!pts[i].is_vertex() && pts[i].edge == e) {
          node_of[i] = n;
          cuts.emplace_back(pts[i].offset, n++);
        }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        es.push_back({cuts[k].second, cuts[k + 1].second, cuts[k + 1].first - cuts[k].first});
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].is_vertex()) node_of[i] = pts[i].vertex;
    auto d = oracle::bellman_ford(n, es);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        Rational dij = distance(g, pts[i], pts[j]);
        CHECK(dij == *d[node_of[i]][node_of[j]]);
        CHECK(dij == distance(g, pts[j], pts[i]));
        if (dij != 0) {
          auto m = midpoint(g, pts[i], pts[j]);
          CHECK(distance(g, pts[i], m) == dij / 2);
          CHECK(distance(g, m, pts[j]) == dij / 2);
        }
      }
  }
}

TEST_CASE("portion sets", "[metric_graph]") {
  auto g = star3();
  EdgePortionSet s;
  CHECK(h1_length(g, s) == 0);
  s.add(0, 0, rational(1, 2));
  s.add(0, rational(1, 4), rational(3, 4));
  CHECK(h1_length(g, s) == rational(3, 4));
  CHECK(s.portions().at(0).size() == 1);
  CHECK(h1_length(g, full_portion_set(g)) == g.total_length());
  DyadicSampler rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    EdgePortionSet t;
    std::vector<std::pair<Rational, Rational>> raw;
    for (int k = 0; k < 6; ++k) {
      auto iv = rng.interval({0, 1}, 5);
      t.add(1, iv.lo, iv.hi);
      raw.emplace_back(iv.lo, iv.hi);
    }
    CHECK(h1_length(g, t) == oracle::union_length(raw));
    const auto& list = t.portions().at(1);
    for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].hi < list[i].lo);
  }
  EdgePortionSet bad;
  bad.add(0, 0, 2);
  CHECK_THROWS_AS(h1_length(g, bad), DomainError);
}

TEST_CASE("geometric lengths", "[metric_graph]") {
  auto ls = geometric_lengths(3, rational(1, 2), 1);
  CHECK(ls == std::vector<Rational>{rational(4, 7), rational(2, 7), rational(1, 7)});
  CHECK(geometric_lengths(1, rational(1, 3), 1) == std::vector<Rational>{1});
  CHECK_THROWS_AS(geometric_lengths(2, 1, 1), ParameterError);
  auto g = assign_geometric_lengths(star3(), rational(1, 128), rational(127, 128), std::size_t{0});
  CHECK(g.total_length() == rational(127, 128));
  CHECK(g.edge(1).length == g.edge(0).length / 128);
  CHECK_THROWS_AS(assign_geometric_lengths(star3(), rational(1, 2), 1, std::vector<std::size_t>{0, 0, 1}),
                  ParameterError);
}

TEST_CASE("distance profiles", "[metric_graph]") {
  auto t = triangle();
  // a = u, edge "long" from u to v: min(t, 3/7 + 4/7 - t).
  PLMap p = distance_profile_on_edge(t, GraphPoint::at_vertex(0), 0);
  for (long i = 0; i <= 28; ++i) {
    Rational x = rational(i, 49);
    CHECK(p(x) == min(x, rational(3, 7) + rational(4, 7) - x));
  }
  // a inside the edge at s = 1/7: min(|t-s|, s + d(u,v) + (len - t)).
  Rational s = rational(1, 7);
  PLMap q = distance_profile_on_edge(t, GraphPoint::on_edge(0, s), 0);
  for (long i = 0; i <= 28; ++i) {
    Rational x = rational(i, 49);
    CHECK(q(x) == min(abs(x - s), s + rational(3, 7) + rational(4, 7) - x));
  }
  for (std::size_t k = 0; k < q.piece_count(); ++k) CHECK(abs(q.slope(k)) == 1);
  // Equidistant base point: symmetric tent.
  auto g = star3();
  PLMap sym = distance_profile_on_edge(g, GraphPoint::on_edge(0, rational(1, 2)), 1);
  CHECK(sym(0) == rational(1, 2));
}

TEST_CASE("free arc bound and whole-graph height bound", "[metric_graph]") {
  DyadicSampler rng(3);
  const Rational q = rational(1, 4);
  for (int trial = 0; trial < 30; ++trial) {
    auto g0 = random_graph(rng, 2 + rng.below(5), rng.below(3));
    auto g = assign_geometric_lengths(g0, q, 1, std::size_t{0});
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      auto whole = distance_range(g, GraphPoint::at_vertex(v), full_portion_set(g));
      CHECK(whole->length() >= (1 - q) / 2 * g.total_length());
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      GraphPoint a = random_point(rng, g);
      EdgePortionSet arc;
      arc.add(e, 0, g.edge(e).length);
      CHECK(distance_range(g, a, arc)->length() >= g.edge(e).length / 2);
    }
  }
}

TEST_CASE("diameter", "[metric_graph]") {
  auto g = star3();
  CHECK(diameter(g, full_portion_set(g)) == 2);
  EdgePortionSet s;
  s.add(0, 0, rational(1, 2));
  CHECK(diameter(g, s) == rational(1, 2));
  auto t = triangle();
  // A cycle of length 1 has diameter 1/2.
  CHECK(diameter(t, full_portion_set(t)) == rational(1, 2));
  EdgePortionSet two;
  two.add(0, rational(1, 7), rational(2, 7));
  two.add(1, 0, rational(1, 7));
  using P = std::pair<std::size_t, Rational>;
  Rational brute = 0;
  for (long i = 0; i <= 14; ++i)
    for (long j = 0; j <= 14; ++j)
      for (auto [e1, x] : {P{0, rational(1, 7) + rational(i, 98)}, P{1, rational(i, 98)}})
        for (auto [e2, y] : {P{0, rational(1, 7) + rational(j, 98)}, P{1, rational(j, 98)}})
          brute = max(brute, distance(t, GraphPoint::on_edge(e1, x), GraphPoint::on_edge(e2, y)));
  CHECK(diameter(t, two) >= brute);
  CHECK(diameter(t, two) == brute);
}
