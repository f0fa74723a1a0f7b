#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lel/admissible_path.hpp"
#include "lel/blueprint.hpp"
#include "lel/error.hpp"
#include "lel/metric_graph.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"

namespace lel {

struct TowerOptions {
  Rational q = rational(1, 128);
  std::size_t depth = 5;
};

/// One level X_n of a tower. Edge indices of X_{n-1} are kept at level n;
/// edges of the replacement graph are appended after them.
struct TowerLevel {
  MetricGraph graph;
  ParamMap g;
  std::size_t a;
  std::size_t b;
  Rational mu;  // shortest edge of X_n

  // Filled for n >= 2.
  std::size_t replaced = npos;        // vertex of X_{n-1} blown up into the new graph
  std::size_t visits = 0;             // p: parameters where g_{n-1} hits it
  Rational replacement_length;        // H^1 of the replacement graph
  Rational replacement_bound;         // q mu_{n-1} / (2p)
  std::size_t first_new_edge = 0;     // edges >= this index are new
  std::vector<bool> new_vertex;       // per vertex of X_n
  std::vector<std::size_t> parent;    // vertex of X_n -> vertex of X_{n-1}
  std::vector<Interval> inserted;     // K_i inside I_n
  std::optional<PLMap> collapse;      // rho_{n-1}: I_n -> I_{n-1}
};

class Tower {
 public:
  static Tower expand(const TowerBlueprint& bp, const TowerOptions& opt = {}) {
    validate(bp);
    if (opt.q <= 0 || opt.q >= 1) throw ParameterError("q must lie in (0,1)");
    if (opt.depth < 1) throw ParameterError("depth must be >= 1");
    Tower t;
    t.q_ = opt.q;
    t.blueprint_ = bp;
    t.build_level_one(bp);
    std::size_t n_max = std::min(opt.depth, bp.depth());
    for (std::size_t n = 2; n <= n_max; ++n) t.build_level(bp.levels[n - 2], n);
    t.truncated_ = !(bp.complete && n_max == bp.depth());
    return t;
  }

  std::size_t depth() const { return levels_.size(); }
  const TowerLevel& level(std::size_t n) const { return levels_.at(n - 1); }
  const TowerLevel& top() const { return levels_.back(); }
  const Rational& q() const { return q_; }
  const TowerBlueprint& blueprint() const { return blueprint_; }
  bool cut() const { return blueprint_.cut_edge.has_value(); }

  /// True when the limit space lies beyond the last built level.
  bool truncated() const { return truncated_; }

  /// Upper bound on every limit-minus-level-N quantity (distance, H^1, alpha):
  /// q mu_N / (1 - q), which is at most q^N; zero for a finished blueprint.
  Rational tail() const {
    if (!truncated_) return 0;
    return q_ * top().mu / (1 - q_);
  }

  /// Edge lengths of level n, indexed like its edges.
  std::vector<Rational> metric_level(std::size_t n) const {
    std::vector<Rational> out;
    for (const auto& e : level(n).graph.edges()) out.push_back(e.length);
    return out;
  }

  /// f_{n,k}: level n to level k <= n.
  GraphPoint project(std::size_t n, std::size_t k, const GraphPoint& p) const {
    if (k > n || k < 1 || n > depth()) throw DomainError("bad projection levels");
    GraphPoint cur = level(n).graph.canonical(p);
    for (std::size_t m = n; m > k; --m) {
      const auto& L = level(m);
      if (cur.is_vertex())
        cur = GraphPoint::at_vertex(L.parent[cur.vertex]);
      else if (cur.edge >= L.first_new_edge)
        cur = GraphPoint::at_vertex(L.replaced);
      // Old edges keep index and offset.
    }
    return cur;
  }

  /// rho_{n,k}: I_n -> I_k.
  PLMap collapse_between(std::size_t n, std::size_t k) const {
    if (k > n || k < 1 || n > depth()) throw DomainError("bad collapse levels");
    PLMap out = PLMap::identity(level(n).g.domain());
    for (std::size_t m = n; m > k; --m) out = compose(*level(m).collapse, out);
    return out;
  }

  /// Bracket for the limit distance between two points of the top level.
  Bracket d_estimate(const GraphPoint& x, const GraphPoint& y) const {
    Rational d = distance(top().graph, x, y);
    return {d, d + tail()};
  }

  /// Bracket for the limit H^1 of the set whose top-level trace is s.
  Bracket h1_estimate(const EdgePortionSet& s) const {
    Rational h = h1_length(top().graph, s);
    if (s.empty()) return {0, 0};
    return {h, h + tail()};
  }

  struct AlphaBeta {
    Rational alpha_n;
    Rational beta_n;
    Rational h1_n;
    Bracket alpha;
    Bracket beta;
    Bracket h1;
  };

  AlphaBeta alpha_beta() const {
    const auto& L = top();
    Rational beta = 0;
    GraphPoint a = GraphPoint::at_vertex(L.a);
    for (std::size_t e = 0; e < L.graph.edge_count(); ++e) {
      PLMap prof = distance_profile_on_edge(L.graph, a, e);
      for (const auto& y : prof.ys()) beta = max(beta, y);
    }
    Rational alpha = L.g.domain().hi;
    Rational h1 = L.graph.total_length();
    Rational t = tail();
    return {alpha, beta, h1, {alpha, alpha + t}, {beta, beta + t}, {h1, h1 + t}};
  }

 private:
  Tower() = default;

  void build_level_one(const TowerBlueprint& bp) {
    MetricGraph raw = graph_from_spec(bp.base);
    std::size_t a = *raw.find_vertex(bp.a), b = *raw.find_vertex(bp.b);
    Rational total = 1 - q_;
    MetricGraph g = raw;
    if (!bp.base.edges.empty() && bp.base.edges[0].length) {
      // Given lengths are taken as proportions of the level-1 total.
      Rational sum = raw.total_length();
      std::vector<Rational> ls;
      for (const auto& e : raw.edges()) ls.push_back(e.length * total / sum);
      g = raw.with_lengths(ls);
    } else {
      auto order = bfs_edge_order(raw.topology(), a);
      if (bp.cut_edge) {
        std::size_t ce = *raw.find_edge(*bp.cut_edge);
        order.erase(std::find(order.begin(), order.end(), ce));
        order.insert(order.begin(), ce);
      }
      g = assign_geometric_lengths(raw, q_, total, order);
      if (bp.cut_edge &&
          distance(g, GraphPoint::at_vertex(a), GraphPoint::at_vertex(b)) < (1 - q_) * total)
        throw ConstructionError("cut edge does not dominate d(a,b)");
    }
    auto walk = admissible_walk(g, a, b);
    ParamMap gm = natural_parametrization(g, walk);
    Rational mu = g.min_edge_length();
    levels_.push_back(TowerLevel{std::move(g), std::move(gm), a, b, std::move(mu)});
  }

  void build_level(const LevelSpec& spec, std::size_t n) {
    const TowerLevel& prev = levels_.back();
    const MetricGraph& G = prev.graph;
    const std::size_t x = *G.find_vertex(spec.replaces);
    std::vector<Rational> hits = visits(G, prev.g, x);
    const std::size_t p = hits.size();
    if (p == 0) throw ConstructionError("g misses the replaced vertex " + spec.replaces);
    Rational bound = q_ * prev.mu / (2 * p);
    Rational total = bound / 2;

    // Replacement graph with geometric lengths from its first vertex.
    MetricGraph sub = assign_geometric_lengths(graph_from_spec(spec.graph), q_, total, std::size_t{0});

    // Assemble X_n: old vertices except x, then the new ones.
    std::vector<std::string> names;
    std::vector<std::size_t> old_to_new(G.vertex_count(), npos), parent;
    std::vector<bool> fresh;
    for (std::size_t v = 0; v < G.vertex_count(); ++v) {
      if (v == x) continue;
      old_to_new[v] = names.size();
      names.push_back(G.vertex_name(v));
      parent.push_back(v);
      fresh.push_back(false);
    }
    const std::size_t sub_base = names.size();
    for (std::size_t v = 0; v < sub.vertex_count(); ++v) {
      names.push_back(sub.vertex_name(v));
      parent.push_back(x);
      fresh.push_back(true);
    }
    std::map<std::string, std::size_t> attach;
    for (const auto& [e, v] : spec.attach) attach[e] = sub_base + *sub.find_vertex(v);
    std::vector<EdgeSpec> edges;
    for (const auto& e : G.edges()) {
      EdgeSpec ne = e;
      ne.u = e.u == x ? attach.at(e.name) : old_to_new[e.u];
      ne.v = e.v == x ? attach.at(e.name) : old_to_new[e.v];
      edges.push_back(std::move(ne));
    }
    const std::size_t first_new = edges.size();
    for (const auto& e : sub.edges()) edges.push_back({e.name, sub_base + e.u, sub_base + e.v, e.length});
    MetricGraph X(names, std::move(edges));

    auto lift = [&](std::size_t old, const std::optional<std::string>& l) {
      return old == x ? sub_base + *sub.find_vertex(*l) : old_to_new[old];
    };
    std::size_t a = lift(prev.a, spec.lift_a), b = lift(prev.b, spec.lift_b);

    // g_n: old pieces shifted, a walk through the new graph at every hit.
    std::vector<ParamPiece> pieces;
    std::vector<Rational> lengths;
    std::vector<Interval> inserted;
    std::vector<CollapsePiece> rho;
    Rational shift = 0;
    const auto& old_pieces = prev.g.pieces();
    auto insert_kappa = [&](std::size_t piece_before, std::size_t piece_after) {
      std::size_t entry = piece_before == npos ? a : attach.at(G.edge(old_pieces[piece_before].edge).name);
      std::size_t exit = piece_after == npos ? b : attach.at(G.edge(old_pieces[piece_after].edge).name);
      auto walk = admissible_walk(sub, entry - sub_base, exit - sub_base);
      Rational start = pieces.empty() ? Rational(0) : pieces.back().start + lengths.back();
      Rational at = start;
      for (const auto& s : walk.steps) {
        pieces.push_back({at, first_new + s.edge, s.forward});
        lengths.push_back(sub.edge(s.edge).length);
        at += sub.edge(s.edge).length;
      }
      inserted.emplace_back(start, at);
      rho.push_back({Interval(start, at), PieceKind::collapse});
      shift += at - start;
    };
    std::size_t hit = 0;
    for (std::size_t i = 0; i < old_pieces.size(); ++i) {
      if (hit < p && hits[hit] == old_pieces[i].start) {
        insert_kappa(i == 0 ? npos : i - 1, i);
        ++hit;
      }
      Rational start = old_pieces[i].start + shift;
      pieces.push_back({start, old_pieces[i].edge, old_pieces[i].forward});
      lengths.push_back(prev.g.piece_length(i));
      rho.push_back({Interval(start, start + lengths.back()), PieceKind::keep});
    }
    if (hit < p) {
      insert_kappa(old_pieces.size() - 1, npos);
      ++hit;
    }
    ParamMap g(0, std::move(pieces), std::move(lengths));
    if (!(evaluate(X, g, 0) == GraphPoint::at_vertex(a)) ||
        !(evaluate(X, g, g.domain().hi) == GraphPoint::at_vertex(b)))
      throw ConstructionError("level " + std::to_string(n) + ": g does not join a to b");

    TowerLevel L{std::move(X), std::move(g), a, b, Rational(0)};
    L.mu = L.graph.min_edge_length();
    L.replaced = x;
    L.visits = p;
    L.replacement_length = sub.total_length();
    L.replacement_bound = bound;
    L.first_new_edge = first_new;
    L.new_vertex = std::move(fresh);
    L.parent = std::move(parent);
    L.inserted = std::move(inserted);
    L.collapse = collapse_map(rho, Rational(0));
    levels_.push_back(std::move(L));
  }

  Rational q_;
  TowerBlueprint blueprint_;
  std::vector<TowerLevel> levels_;
  bool truncated_ = true;
};

}  // namespace lel
