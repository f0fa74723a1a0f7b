#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lel/error.hpp"
#include "lel/metric_graph.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"

namespace lel {

struct WalkStep {
  std::size_t edge;
  bool forward;  // traversed from the edge's first endpoint to its second
  friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

struct EdgeWalk {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<WalkStep> steps;
  // Intermediate order-2 vertices (by position in the vertex sequence) where
  // the walk turns back along the edge it arrived on.
  std::vector<std::size_t> forced_reversals;
};

inline std::size_t step_tail(const Topology& t, const WalkStep& s) {
  return s.forward ? t.edges[s.edge].first : t.edges[s.edge].second;
}

inline std::size_t step_head(const Topology& t, const WalkStep& s) {
  return s.forward ? t.edges[s.edge].second : t.edges[s.edge].first;
}

/// Vertex sequence v_0 = start, ..., v_m = end of a walk.
inline std::vector<std::size_t> walk_vertices(const Topology& t, const EdgeWalk& w) {
  std::vector<std::size_t> vs{w.start};
  for (const auto& s : w.steps) vs.push_back(step_head(t, s));
  return vs;
}

/// Describes the first violated walk invariant, or nullopt for an admissible walk.
inline std::optional<std::string> admissibility_error(const Topology& t, const EdgeWalk& w) {
  std::size_t cur = w.start;
  std::vector<int> mult(t.edges.size(), 0);
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const auto& s = w.steps[i];
    if (s.edge >= t.edges.size()) return "step " + std::to_string(i) + " uses an unknown edge";
    if (step_tail(t, s) != cur) return "step " + std::to_string(i) + " is not contiguous";
    cur = step_head(t, s);
    ++mult[s.edge];
  }
  if (cur != w.end) return std::string("walk does not end at its end vertex");
  for (std::size_t e = 0; e < mult.size(); ++e)
    if (mult[e] < 1 || mult[e] > 2)
      return "edge " + std::to_string(e) + " used " + std::to_string(mult[e]) + " times";
  for (std::size_t i = 0; i + 1 < w.steps.size(); ++i) {
    std::size_t v = step_head(t, w.steps[i]);
    if (t.degree(v) == 2 && w.steps[i].edge == w.steps[i + 1].edge)
      return "walk turns back at order-2 vertex " + std::to_string(v);
  }
  return std::nullopt;
}

namespace detail {

struct Chain {
  std::size_t from;
  std::size_t to;
  std::vector<WalkStep> steps;
};

// Splits the edges into maximal chains whose interior vertices are
// order-2 vertices outside keep.
inline std::vector<Chain> build_chains(const Topology& t, const std::vector<bool>& keep) {
  auto inc = t.incidence();
  std::vector<bool> used(t.edges.size(), false);
  std::vector<Chain> chains;
  auto trace = [&](std::size_t v, std::size_t e) {
    Chain c{v, v, {}};
    std::size_t cur = v;
    for (;;) {
      used[e] = true;
      bool fwd = t.edges[e].first == cur;
      c.steps.push_back({e, fwd});
      cur = fwd ? t.edges[e].second : t.edges[e].first;
      if (keep[cur]) break;
      std::size_t nxt = inc[cur][0] == e ? inc[cur][1] : inc[cur][0];
      if (used[nxt]) break;
      e = nxt;
    }
    c.to = cur;
    chains.push_back(std::move(c));
  };
  for (std::size_t v = 0; v < t.vertex_count; ++v)
    if (keep[v])
      for (std::size_t e : inc[v])
        if (!used[e]) trace(v, e);
  return chains;
}

inline std::vector<WalkStep> reversed(const std::vector<WalkStep>& s) {
  std::vector<WalkStep> out;
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back({it->edge, !it->forward});
  return out;
}

inline std::vector<std::size_t> reversal_positions(const Topology& t,
                                                   const std::vector<WalkStep>& steps) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    std::size_t v = step_head(t, steps[i]);
    if (t.degree(v) == 2 && steps[i].edge == steps[i + 1].edge) out.push_back(i + 1);
  }
  return out;
}

// Removes turn-backs by reversing closed sub-walks between two visits of
// the offending vertex; multiplicities and endpoints are unchanged.
inline void repair_reversals(const Topology& t, EdgeWalk& w) {
  for (std::size_t guard = 0; guard < 4 * w.steps.size() + 4; ++guard) {
    auto bad = reversal_positions(t, w.steps);
    if (bad.empty()) return;
    auto vs = walk_vertices(t, w);
    bool improved = false;
    for (std::size_t pos : bad) {
      std::size_t v = vs[pos];
      for (std::size_t other = 0; other < vs.size() && !improved; ++other) {
        if (other == pos || vs[other] != v) continue;
        std::size_t i = std::min(pos, other), j = std::max(pos, other);
        auto trial = w.steps;
        auto mid = reversed(std::vector<WalkStep>(trial.begin() + static_cast<long>(i),
                                                  trial.begin() + static_cast<long>(j)));
        std::copy(mid.begin(), mid.end(), trial.begin() + static_cast<long>(i));
        if (reversal_positions(t, trial).size() < bad.size()) {
          w.steps = std::move(trial);
          improved = true;
        }
      }
      if (improved) break;
    }
    if (!improved) {
      w.forced_reversals = bad;
      return;
    }
  }
  w.forced_reversals = reversal_positions(t, w.steps);
}

}  // namespace detail

/// Admissible walk from a to b: each edge once or twice, no turn-back at
/// order-2 vertices. Order-2 vertices other than a, b and those listed in
/// distinguished are suppressed first; an Euler trail of the graph with the
/// edges of one simple a-b path single and all others doubled is then
/// expanded back.
inline EdgeWalk admissible_walk(const Topology& t, std::size_t a, std::size_t b,
                                const std::vector<std::size_t>& distinguished = {}) {
  if (a >= t.vertex_count || b >= t.vertex_count) throw DomainError("walk endpoint not in graph");
  if (t.edges.empty()) throw ConstructionError("graph has no edges");
  if (!t.connected()) throw ConstructionError("graph is disconnected");
  std::vector<bool> keep(t.vertex_count, false);
  for (std::size_t v = 0; v < t.vertex_count; ++v) keep[v] = t.degree(v) != 2;
  keep[a] = keep[b] = true;
  for (std::size_t v : distinguished) keep.at(v) = true;
  auto chains = detail::build_chains(t, keep);

  // Simple a-b path in the chain graph, by BFS over chains.
  std::vector<int> mult(chains.size(), 2);
  if (a != b) {
    std::vector<std::size_t> via(t.vertex_count, npos);
    std::vector<bool> seen(t.vertex_count, false);
    std::deque<std::size_t> todo{a};
    seen[a] = true;
    while (!todo.empty() && !seen[b]) {
      std::size_t v = todo.front();
      todo.pop_front();
      for (std::size_t c = 0; c < chains.size(); ++c) {
        const auto& ch = chains[c];
        if (ch.from == ch.to) continue;
        std::size_t w = ch.from == v ? ch.to : ch.to == v ? ch.from : npos;
        if (w == npos || seen[w]) continue;
        seen[w] = true;
        via[w] = c;
        todo.push_back(w);
      }
    }
    for (std::size_t v = b; v != a;) {
      std::size_t c = via[v];
      mult[c] = 1;
      v = chains[c].from == v ? chains[c].to : chains[c].from;
    }
  }

  // Hierholzer over chain copies, lowest chain id first.
  struct Copy {
    std::size_t chain;
  };
  std::vector<Copy> copies;
  std::vector<std::vector<std::size_t>> adj(t.vertex_count);
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (int k = 0; k < mult[c]; ++k) {
      std::size_t id = copies.size();
      copies.push_back({c});
      adj[chains[c].from].push_back(id);
      if (chains[c].to != chains[c].from) adj[chains[c].to].push_back(id);
    }
  std::vector<bool> used(copies.size(), false);
  std::vector<std::size_t> ptr(t.vertex_count, 0);
  struct Frame {
    std::size_t vertex;
    std::size_t chain;
    bool forward;
  };
  std::vector<Frame> stack{{a, npos, true}};
  std::vector<Frame> trail;
  while (!stack.empty()) {
    std::size_t v = stack.back().vertex;
    auto& p = ptr[v];
    while (p < adj[v].size() && used[adj[v][p]]) ++p;
    if (p == adj[v].size()) {
      trail.push_back(stack.back());
      stack.pop_back();
      continue;
    }
    std::size_t id = adj[v][p];
    used[id] = true;
    const auto& ch = chains[copies[id].chain];
    bool fwd = ch.from == v;
    stack.push_back({fwd ? ch.to : ch.from, copies[id].chain, fwd});
  }
  std::reverse(trail.begin(), trail.end());

  EdgeWalk w{a, b, {}, {}};
  for (const auto& f : trail) {
    if (f.chain == npos) continue;
    const auto& s = chains[f.chain].steps;
    auto part = f.forward ? s : detail::reversed(s);
    w.steps.insert(w.steps.end(), part.begin(), part.end());
  }
  if (walk_vertices(t, w).back() != b) throw ConstructionError("Euler trail did not reach b");
  detail::repair_reversals(t, w);
  return w;
}

inline EdgeWalk admissible_walk(const MetricGraph& g, std::size_t a, std::size_t b,
                                const std::vector<std::size_t>& distinguished = {}) {
  return admissible_walk(g.topology(), a, b, distinguished);
}

struct ParamPiece {
  Rational start;
  std::size_t edge;
  bool forward;
};

/// Piecewise isometry from [lo, hi] onto a walk: each piece runs along one
/// whole edge. Pieces are contiguous and carry their edge's length.
class ParamMap {
 public:
  ParamMap(Rational origin, std::vector<ParamPiece> pieces, std::vector<Rational> lengths)
      : origin_(std::move(origin)), pieces_(std::move(pieces)), lengths_(std::move(lengths)) {
    if (pieces_.empty()) throw ConstructionError("ParamMap needs pieces");
    if (pieces_.size() != lengths_.size()) throw ConstructionError("ParamMap length mismatch");
    Rational at = origin_;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].start != at) throw ConstructionError("ParamMap pieces not contiguous");
      if (lengths_[i] <= 0) throw ConstructionError("ParamMap piece of non-positive length");
      at += lengths_[i];
    }
    end_ = at;
  }

  Interval domain() const { return {origin_, end_}; }
  const std::vector<ParamPiece>& pieces() const { return pieces_; }
  const Rational& piece_length(std::size_t i) const { return lengths_[i]; }
  Rational piece_end(std::size_t i) const { return pieces_[i].start + lengths_[i]; }

  /// Index of the piece containing t (the left one at an interior breakpoint).
  std::size_t piece_of(const Rational& t) const {
    if (!domain().contains(t)) throw DomainError("parameter " + to_string(t) + " out of domain");
    auto it = std::lower_bound(pieces_.begin() + 1, pieces_.end(), t,
                               [](const ParamPiece& p, const Rational& x) { return p.start < x; });
    return static_cast<std::size_t>(it - pieces_.begin()) - 1;
  }

  /// Edge offset (from the edge's first endpoint) of parameter t in piece i.
  Rational offset_in(std::size_t i, const Rational& t) const {
    Rational run = t - pieces_[i].start;
    return pieces_[i].forward ? run : Rational(lengths_[i] - run);
  }

  std::vector<Rational> breakpoints() const {
    std::vector<Rational> out;
    for (const auto& p : pieces_) out.push_back(p.start);
    out.push_back(end_);
    return out;
  }

 private:
  Rational origin_;
  std::vector<ParamPiece> pieces_;
  std::vector<Rational> lengths_;
  Rational end_;
};

inline ParamMap natural_parametrization(const MetricGraph& g, const EdgeWalk& w,
                                        const Rational& origin = 0) {
  if (w.steps.empty()) throw ConstructionError("empty walk");
  std::vector<ParamPiece> pieces;
  std::vector<Rational> lengths;
  Rational at = origin;
  for (const auto& s : w.steps) {
    pieces.push_back({at, s.edge, s.forward});
    lengths.push_back(g.edge(s.edge).length);
    at += g.edge(s.edge).length;
  }
  return ParamMap(origin, std::move(pieces), std::move(lengths));
}

inline GraphPoint evaluate(const MetricGraph& g, const ParamMap& k, const Rational& t) {
  std::size_t i = k.piece_of(t);
  return g.canonical(GraphPoint::on_edge(k.pieces()[i].edge, k.offset_in(i, t)));
}

/// Union of the edge portions swept by k on J.
inline EdgePortionSet image_of_interval(const MetricGraph& g, const ParamMap& k,
                                        const Interval& j) {
  if (!k.domain().contains(j)) throw DomainError("interval " + to_string(j) + " out of domain");
  EdgePortionSet out;
  if (j.degenerate()) {
    std::size_t i = k.piece_of(j.lo);
    Rational off = k.offset_in(i, j.lo);
    out.add(k.pieces()[i].edge, off, off);
    return out;
  }
  for (std::size_t i = k.piece_of(j.lo); i < k.pieces().size(); ++i) {
    const auto& p = k.pieces()[i];
    if (!(p.start < j.hi)) break;
    Rational s0 = max(j.lo, p.start), s1 = min(j.hi, k.piece_end(i));
    if (s0 < s1) out.add(p.edge, k.offset_in(i, s0), k.offset_in(i, s1));
  }
  check_portions(g, out);
  return out;
}

/// t -> d(a, k(t)) as an exact PL map on the domain of k; slopes are +-1.
inline PLMap height_profile(const MetricGraph& g, const ParamMap& k, const GraphPoint& a) {
  std::vector<Rational> xs, ys;
  std::vector<std::optional<PLMap>> cache(g.edge_count());
  for (std::size_t i = 0; i < k.pieces().size(); ++i) {
    const auto& p = k.pieces()[i];
    if (!cache[p.edge]) cache[p.edge] = distance_profile_on_edge(g, a, p.edge);
    const PLMap& prof = *cache[p.edge];
    const Rational& len = k.piece_length(i);
    std::vector<std::pair<Rational, Rational>> nodes;
    for (std::size_t n = 0; n < prof.xs().size(); ++n) {
      Rational t = p.forward ? Rational(p.start + prof.xs()[n]) : Rational(p.start + len - prof.xs()[n]);
      nodes.emplace_back(t, prof.ys()[n]);
    }
    if (!p.forward) std::reverse(nodes.begin(), nodes.end());
    for (std::size_t n = (i == 0 ? 0 : 1); n < nodes.size(); ++n) {
      xs.push_back(nodes[n].first);
      ys.push_back(nodes[n].second);
    }
  }
  return PLMap(std::move(xs), std::move(ys));
}

/// Parameters t with k(t) equal to vertex v.
inline std::vector<Rational> visits(const MetricGraph& g, const ParamMap& k, std::size_t v) {
  std::vector<Rational> out;
  auto bp = k.breakpoints();
  for (const auto& t : bp)
    if (evaluate(g, k, t) == GraphPoint::at_vertex(v)) out.push_back(t);
  return out;
}

}  // namespace lel
