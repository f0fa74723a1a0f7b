#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lel/error.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"

namespace lel {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Bare combinatorial multigraph, used where lengths do not matter.
struct Topology {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::vector<std::size_t>> incidence() const {
    std::vector<std::vector<std::size_t>> inc(vertex_count);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      inc[edges[e].first].push_back(e);
      if (edges[e].second != edges[e].first) inc[edges[e].second].push_back(e);
    }
    return inc;
  }

  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (auto [a, b] : edges) d += (a == v) + (b == v);
    return d;
  }

  bool connected() const {
    if (vertex_count == 0) return false;
    auto inc = incidence();
    std::vector<bool> seen(vertex_count, false);
    std::deque<std::size_t> todo{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!todo.empty()) {
      std::size_t v = todo.front();
      todo.pop_front();
      for (std::size_t e : inc[v]) {
        std::size_t w = edges[e].first == v ? edges[e].second : edges[e].first;
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          todo.push_back(w);
        }
      }
    }
    return count == vertex_count;
  }
};

struct EdgeSpec {
  std::string name;
  std::size_t u;
  std::size_t v;
  Rational length;
};

/// A point of a metric graph: a vertex, or an interior offset on an edge
/// measured from the edge's u end.
struct GraphPoint {
  std::size_t vertex = npos;
  std::size_t edge = npos;
  Rational offset;

  static GraphPoint at_vertex(std::size_t v) { return {v, npos, 0}; }
  static GraphPoint on_edge(std::size_t e, Rational t) { return {npos, e, std::move(t)}; }
  bool is_vertex() const { return vertex != npos; }
  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

/// Connected loop-free graph with positive rational edge lengths and its
/// shortest-path metric.
class MetricGraph {
 public:
  MetricGraph(std::vector<std::string> vertex_names, std::vector<EdgeSpec> edges)
      : vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
    const std::size_t n = vertex_names_.size();
    if (n == 0) throw ConstructionError("graph has no vertices");
    if (edges_.empty() && n > 1) throw ConstructionError("graph is disconnected");
    incident_.assign(n, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& ed = edges_[e];
      if (ed.u >= n || ed.v >= n)
        throw ConstructionError("edge " + ed.name + " has an unknown endpoint");
      if (ed.u == ed.v) throw ConstructionError("edge " + ed.name + " is a loop");
      if (ed.length <= 0)
        throw ConstructionError("edge " + ed.name + " has non-positive length");
      incident_[ed.u].push_back(e);
      incident_[ed.v].push_back(e);
    }
    if (!topology().connected()) throw ConstructionError("graph is disconnected");
    all_pairs();
  }

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const EdgeSpec& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  const std::string& vertex_name(std::size_t v) const { return vertex_names_.at(v); }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }
  std::size_t degree(std::size_t v) const { return incident_.at(v).size(); }

  std::optional<std::size_t> find_vertex(const std::string& name) const {
    for (std::size_t i = 0; i < vertex_names_.size(); ++i)
      if (vertex_names_[i] == name) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> find_edge(const std::string& name) const {
    for (std::size_t i = 0; i < edges_.size(); ++i)
      if (edges_[i].name == name) return i;
    return std::nullopt;
  }

  std::size_t other_end(std::size_t e, std::size_t v) const {
    return edges_[e].u == v ? edges_[e].v : edges_[e].u;
  }

  Topology topology() const {
    Topology t{vertex_count(), {}};
    for (const auto& e : edges_) t.edges.emplace_back(e.u, e.v);
    return t;
  }

  Rational total_length() const {
    Rational s = 0;
    for (const auto& e : edges_) s += e.length;
    return s;
  }

  Rational min_edge_length() const {
    if (edges_.empty()) return 0;
    Rational m = edges_[0].length;
    for (const auto& e : edges_) m = min(m, e.length);
    return m;
  }

  const Rational& vertex_distance(std::size_t u, std::size_t v) const {
    return dist_.at(u).at(v);
  }

  /// Next vertex on a shortest route from u to v (u itself when u == v).
  std::size_t next_hop(std::size_t u, std::size_t v) const { return next_.at(u).at(v); }

  /// Validates p and returns its canonical form (endpoints become vertices).
  GraphPoint canonical(const GraphPoint& p) const {
    if (p.is_vertex()) {
      if (p.vertex >= vertex_count()) throw DomainError("unknown vertex");
      return GraphPoint::at_vertex(p.vertex);
    }
    if (p.edge >= edge_count()) throw DomainError("unknown edge");
    const auto& e = edges_[p.edge];
    if (p.offset < 0 || p.offset > e.length)
      throw DomainError("offset " + to_string(p.offset) + " outside edge " + e.name);
    if (p.offset == 0) return GraphPoint::at_vertex(e.u);
    if (p.offset == e.length) return GraphPoint::at_vertex(e.v);
    return p;
  }

  /// Copy with new edge lengths, indexed like edges().
  MetricGraph with_lengths(const std::vector<Rational>& lengths) const {
    if (lengths.size() != edges_.size())
      throw ParameterError("length vector does not match edge count");
    auto copy = edges_;
    for (std::size_t i = 0; i < copy.size(); ++i) copy[i].length = lengths[i];
    return MetricGraph(vertex_names_, std::move(copy));
  }

 private:
  void all_pairs() {
    const std::size_t n = vertex_count();
    dist_.assign(n, std::vector<Rational>(n));
    next_.assign(n, std::vector<std::size_t>(n, npos));
    std::vector<std::vector<bool>> known(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v) {
      known[v][v] = true;
      next_[v][v] = v;
    }
    for (const auto& e : edges_) {
      for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        if (!known[a][b] || e.length < dist_[a][b]) {
          dist_[a][b] = e.length;
          known[a][b] = true;
          next_[a][b] = b;
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        if (!known[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!known[k][j]) continue;
          Rational via = dist_[i][k] + dist_[k][j];
          if (!known[i][j] || via < dist_[i][j]) {
            dist_[i][j] = std::move(via);
            known[i][j] = true;
            next_[i][j] = next_[i][k];
          }
        }
      }
  }

  std::vector<std::string> vertex_names_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::vector<Rational>> dist_;
  std::vector<std::vector<std::size_t>> next_;
};

namespace detail {

// Ways to leave a point: (vertex, distance to it).
inline std::vector<std::pair<std::size_t, Rational>> exits(const MetricGraph& g,
                                                           const GraphPoint& p) {
  if (p.is_vertex()) return {{p.vertex, Rational(0)}};
  const auto& e = g.edge(p.edge);
  return {{e.u, p.offset}, {e.v, e.length - p.offset}};
}

}  // namespace detail

/// Shortest-path distance between two points.
inline Rational distance(const MetricGraph& g, const GraphPoint& p0, const GraphPoint& q0) {
  GraphPoint p = g.canonical(p0), q = g.canonical(q0);
  std::optional<Rational> best;
  if (!p.is_vertex() && !q.is_vertex() && p.edge == q.edge) best = abs(p.offset - q.offset);
  for (const auto& [u, du] : detail::exits(g, p))
    for (const auto& [v, dv] : detail::exits(g, q)) {
      Rational c = du + g.vertex_distance(u, v) + dv;
      if (!best || c < *best) best = std::move(c);
    }
  return *best;
}

/// The point at distance t along a shortest route from p to q.
inline GraphPoint point_along_geodesic(const MetricGraph& g, const GraphPoint& p0,
                                       const GraphPoint& q0, Rational t) {
  GraphPoint p = g.canonical(p0), q = g.canonical(q0);
  Rational total = distance(g, p, q);
  if (t < 0 || t > total) throw DomainError("geodesic parameter out of range");
  if (!p.is_vertex() && !q.is_vertex() && p.edge == q.edge &&
      abs(p.offset - q.offset) == total) {
    Rational off = p.offset < q.offset ? Rational(p.offset + t) : Rational(p.offset - t);
    return g.canonical(GraphPoint::on_edge(p.edge, off));
  }
  // Pick the exit pair realizing the distance, then walk vertex to vertex.
  for (const auto& [u, du] : detail::exits(g, p))
    for (const auto& [v, dv] : detail::exits(g, q)) {
      if (du + g.vertex_distance(u, v) + dv != total) continue;
      if (t <= du) {
        if (p.is_vertex()) return p;
        const auto& e = g.edge(p.edge);
        return g.canonical(GraphPoint::on_edge(p.edge, u == e.u ? Rational(p.offset - t) : Rational(p.offset + t)));
      }
      Rational rest = t - du;
      std::size_t cur = u;
      while (cur != v) {
        std::size_t nxt = g.next_hop(cur, v);
        // Shortest edge joining cur and nxt.
        std::size_t best = npos;
        for (std::size_t e : g.incident(cur))
          if (g.other_end(e, cur) == nxt &&
              (best == npos || g.edge(e).length < g.edge(best).length))
            best = e;
        const auto& e = g.edge(best);
        if (rest <= e.length) {
          Rational off = e.u == cur ? rest : Rational(e.length - rest);
          return g.canonical(GraphPoint::on_edge(best, off));
        }
        rest -= e.length;
        cur = nxt;
      }
      if (q.is_vertex()) return q;
      const auto& e = g.edge(q.edge);
      return g.canonical(GraphPoint::on_edge(q.edge, v == e.u ? rest : Rational(e.length - rest)));
    }
  throw ConstructionError("no geodesic found");
}

inline GraphPoint midpoint(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
  Rational d = distance(g, p, q);
  if (d == 0) throw DomainError("midpoint of a point with itself");
  return point_along_geodesic(g, p, q, d / 2);
}

/// Union of closed sub-intervals of edges, kept sorted and disjoint.
class EdgePortionSet {
 public:
  void add(std::size_t edge, Rational lo, Rational hi) {
    if (hi < lo) std::swap(lo, hi);
    auto& list = portions_[edge];
    Interval merged(std::move(lo), std::move(hi));
    std::vector<Interval> out;
    out.reserve(list.size() + 1);
    bool placed = false;
    for (auto& iv : list) {
      if (iv.hi < merged.lo) {
        out.push_back(std::move(iv));
      } else if (merged.hi < iv.lo) {
        if (!placed) {
          out.push_back(merged);
          placed = true;
        }
        out.push_back(std::move(iv));
      } else {
        merged.lo = min(merged.lo, iv.lo);
        merged.hi = max(merged.hi, iv.hi);
      }
    }
    if (!placed) out.push_back(merged);
    list = std::move(out);
  }

  void add_all(const EdgePortionSet& other) {
    for (const auto& [e, list] : other.portions_)
      for (const auto& iv : list) add(e, iv.lo, iv.hi);
  }

  const std::map<std::size_t, std::vector<Interval>>& portions() const { return portions_; }
  bool empty() const { return portions_.empty(); }
  friend bool operator==(const EdgePortionSet&, const EdgePortionSet&) = default;

 private:
  std::map<std::size_t, std::vector<Interval>> portions_;
};

inline EdgePortionSet full_portion_set(const MetricGraph& g) {
  EdgePortionSet s;
  for (std::size_t e = 0; e < g.edge_count(); ++e) s.add(e, 0, g.edge(e).length);
  return s;
}

inline void check_portions(const MetricGraph& g, const EdgePortionSet& s) {
  for (const auto& [e, list] : s.portions()) {
    if (e >= g.edge_count()) throw DomainError("portion on unknown edge");
    for (const auto& iv : list)
      if (iv.lo < 0 || iv.hi > g.edge(e).length)
        throw DomainError("portion " + to_string(iv) + " leaves edge " + g.edge(e).name);
  }
}

/// H^1 of a portion set: total length of the union.
inline Rational h1_length(const MetricGraph& g, const EdgePortionSet& s) {
  check_portions(g, s);
  Rational total = 0;
  for (const auto& [e, list] : s.portions())
    for (const auto& iv : list) total += iv.length();
  return total;
}

inline bool covers_graph(const MetricGraph& g, const EdgePortionSet& s) {
  return h1_length(g, s) == g.total_length();
}

/// Edge lengths c*q^i in the given edge order, scaled to sum to total.
inline std::vector<Rational> geometric_lengths(std::size_t count, const Rational& q,
                                               const Rational& total) {
  if (q <= 0 || q >= 1) throw ParameterError("q must lie in (0,1)");
  if (total <= 0) throw ParameterError("total length must be positive");
  Rational c = total * (1 - q) / (1 - pow(q, static_cast<unsigned>(count)));
  std::vector<Rational> out;
  Rational l = c;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(l);
    l *= q;
  }
  return out;
}

/// Edges in order of discovery by breadth-first search from start.
inline std::vector<std::size_t> bfs_edge_order(const Topology& t, std::size_t start) {
  auto inc = t.incidence();
  std::vector<bool> seen_v(t.vertex_count, false), seen_e(t.edges.size(), false);
  std::vector<std::size_t> order;
  std::deque<std::size_t> todo{start};
  seen_v.at(start) = true;
  while (!todo.empty()) {
    std::size_t v = todo.front();
    todo.pop_front();
    for (std::size_t e : inc[v]) {
      if (!seen_e[e]) {
        seen_e[e] = true;
        order.push_back(e);
      }
      std::size_t w = t.edges[e].first == v ? t.edges[e].second : t.edges[e].first;
      if (!seen_v[w]) {
        seen_v[w] = true;
        todo.push_back(w);
      }
    }
  }
  if (order.size() != t.edges.size()) throw ConstructionError("graph is disconnected");
  return order;
}

/// Geometric lengths with ratio q along ordering; the graph's H^1 becomes total.
inline MetricGraph assign_geometric_lengths(const MetricGraph& g, const Rational& q,
                                            const Rational& total,
                                            const std::vector<std::size_t>& ordering) {
  if (ordering.size() != g.edge_count())
    throw ParameterError("ordering must list every edge once");
  std::vector<bool> seen(g.edge_count(), false);
  for (std::size_t e : ordering) {
    if (e >= g.edge_count() || seen[e]) throw ParameterError("ordering must list every edge once");
    seen[e] = true;
  }
  auto ls = geometric_lengths(g.edge_count(), q, total);
  std::vector<Rational> lengths(g.edge_count());
  for (std::size_t i = 0; i < ordering.size(); ++i) lengths[ordering[i]] = ls[i];
  return g.with_lengths(lengths);
}

inline MetricGraph assign_geometric_lengths(const MetricGraph& g, const Rational& q,
                                            const Rational& total, std::size_t start_vertex) {
  return assign_geometric_lengths(g, q, total, bfs_edge_order(g.topology(), start_vertex));
}

/// t -> d(a, point at offset t on e), exact on [0, length(e)].
inline PLMap distance_profile_on_edge(const MetricGraph& g, const GraphPoint& a0,
                                      std::size_t e) {
  GraphPoint a = g.canonical(a0);
  const auto& ed = g.edge(e);
  const Rational& len = ed.length;
  // Profile is min of affine functions; collect them as (slope, intercept).
  std::vector<std::pair<Rational, Rational>> lines;
  for (const auto& [w, dw] : detail::exits(g, a)) {
    lines.emplace_back(Rational(1), dw + g.vertex_distance(w, ed.u));
    lines.emplace_back(Rational(-1), dw + g.vertex_distance(w, ed.v) + len);
  }
  std::optional<Rational> s;
  if (!a.is_vertex() && a.edge == e) s = a.offset;
  auto value = [&](const Rational& t) {
    Rational best = lines[0].first * t + lines[0].second;
    for (const auto& [m, c] : lines) best = min(best, m * t + c);
    if (s) best = min(best, abs(t - *s));
    return best;
  };
  std::vector<Rational> cand{Rational(0), len};
  if (s) cand.push_back(*s);
  std::vector<std::pair<Rational, Rational>> all = lines;
  if (s) {
    all.emplace_back(Rational(1), -*s);
    all.emplace_back(Rational(-1), *s);
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i].first != all[j].first) {
        Rational t = (all[j].second - all[i].second) / (all[i].first - all[j].first);
        if (0 < t && t < len) cand.push_back(t);
      }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::vector<Rational> ys;
  for (const auto& t : cand) ys.push_back(value(t));
  return PLMap(std::move(cand), std::move(ys));
}

/// Smallest interval containing h_a(S), where h_a = d(a, .).
inline std::optional<Interval> distance_range(const MetricGraph& g, const GraphPoint& a,
                                              const EdgePortionSet& s) {
  check_portions(g, s);
  std::optional<Interval> out;
  for (const auto& [e, list] : s.portions()) {
    PLMap prof = distance_profile_on_edge(g, a, e);
    for (const auto& iv : list) {
      Interval im = image_interval(prof, iv);
      if (!out)
        out = im;
      else
        out = Interval(min(out->lo, im.lo), max(out->hi, im.hi));
    }
  }
  return out;
}

namespace detail {

// Constraint a*x + b*y + c*z <= d.
struct Halfspace {
  Rational a, b, c, d;
};

inline std::optional<std::array<Rational, 3>> solve3(const Halfspace& p, const Halfspace& q,
                                                     const Halfspace& r) {
  auto det = [](const Rational& a1, const Rational& b1, const Rational& c1,
                const Rational& a2, const Rational& b2, const Rational& c2,
                const Rational& a3, const Rational& b3, const Rational& c3) -> Rational {
    return a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2) + c1 * (a2 * b3 - a3 * b2);
  };
  Rational D = det(p.a, p.b, p.c, q.a, q.b, q.c, r.a, r.b, r.c);
  if (D == 0) return std::nullopt;
  Rational x = det(p.d, p.b, p.c, q.d, q.b, q.c, r.d, r.b, r.c) / D;
  Rational y = det(p.a, p.d, p.c, q.a, q.d, q.c, r.a, r.d, r.c) / D;
  Rational z = det(p.a, p.b, p.d, q.a, q.b, q.d, r.a, r.b, r.d) / D;
  return std::array<Rational, 3>{x, y, z};
}

// max z subject to the halfspaces; the feasible set is pointed and bounded
// above in z, so the optimum sits at a vertex.
inline std::optional<Rational> lp_max_z(const std::vector<Halfspace>& hs) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j)
      for (std::size_t k = j + 1; k < hs.size(); ++k) {
        auto sol = solve3(hs[i], hs[j], hs[k]);
        if (!sol) continue;
        const auto& [x, y, z] = *sol;
        bool ok = true;
        for (const auto& h : hs)
          if (h.a * x + h.b * y + h.c * z > h.d) {
            ok = false;
            break;
          }
        if (ok && (!best || *best < z)) best = z;
      }
  return best;
}

// Largest distance between a point of portion (e1, i1) and one of (e2, i2).
inline Rational portion_pair_diameter(const MetricGraph& g, std::size_t e1, const Interval& i1,
                                      std::size_t e2, const Interval& i2) {
  const auto& E1 = g.edge(e1);
  const auto& E2 = g.edge(e2);
  std::vector<Halfspace> base{{-1, 0, 0, -i1.lo}, {1, 0, 0, i1.hi},
                              {0, -1, 0, -i2.lo}, {0, 1, 0, i2.hi}};
  // z <= dist via endpoint w1 of E1 and w2 of E2.
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      std::size_t w1 = s1 ? E1.v : E1.u;
      std::size_t w2 = s2 ? E2.v : E2.u;
      // d = (s1 ? len1 - x : x) + D + (s2 ? len2 - y : y)
      Rational ax = s1 ? 1 : -1, by = s2 ? 1 : -1;
      Rational rhs = g.vertex_distance(w1, w2) + (s1 ? E1.length : Rational(0)) +
                     (s2 ? E2.length : Rational(0));
      base.push_back({ax, by, 1, rhs});
    }
  if (e1 != e2) return *lp_max_z(base);
  Rational best = 0;
  for (int side = 0; side < 2; ++side) {
    auto hs = base;
    if (side == 0) {
      hs.push_back({1, -1, 0, 0});   // x <= y
      hs.push_back({1, -1, 1, 0});   // z <= y - x
    } else {
      hs.push_back({-1, 1, 0, 0});   // y <= x
      hs.push_back({-1, 1, 1, 0});   // z <= x - y
    }
    if (auto z = lp_max_z(hs)) best = max(best, *z);
  }
  return best;
}

}  // namespace detail

/// Exact diameter of a portion set in the path metric.
inline Rational diameter(const MetricGraph& g, const EdgePortionSet& s) {
  check_portions(g, s);
  std::vector<std::pair<std::size_t, Interval>> flat;
  for (const auto& [e, list] : s.portions())
    for (const auto& iv : list) flat.emplace_back(e, iv);
  Rational best = 0;
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = i; j < flat.size(); ++j)
      best = max(best, detail::portion_pair_diameter(g, flat[i].first, flat[i].second,
                                                     flat[j].first, flat[j].second));
  return best;
}

}  // namespace lel
