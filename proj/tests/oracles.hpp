#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lel/rational.hpp"

namespace oracle {

using lel::Rational;

// Tent map with k branches evaluated from its closed form.
inline Rational tent(long k, const Rational& x) {
  Rational kx = x * k;
  lel::Integer i = lel::floor(kx);
  if (i == k) i = k - 1;
  Rational frac = kx - Rational(i);
  return i % 2 == 0 ? frac : 1 - frac;
}

// Image of [lo, hi] under a tent map by scanning every branch.
inline std::pair<Rational, Rational> tent_image(long k, const Rational& lo, const Rational& hi) {
  std::vector<Rational> pts{lo, hi};
  for (long i = 1; i < k; ++i) {
    Rational c = lel::rational(i, k);
    if (lo < c && c < hi) pts.push_back(c);
  }
  Rational mn = tent(k, pts[0]), mx = mn;
  for (const auto& p : pts) {
    mn = lel::min(mn, tent(k, p));
    mx = lel::max(mx, tent(k, p));
  }
  return {mn, mx};
}

// Length of a union of closed intervals by sort and sweep.
inline Rational union_length(std::vector<std::pair<Rational, Rational>> ivs) {
  std::sort(ivs.begin(), ivs.end());
  Rational total = 0;
  std::optional<std::pair<Rational, Rational>> cur;
  for (auto& [a, b] : ivs) {
    if (cur && a <= cur->second) {
      cur->second = lel::max(cur->second, b);
    } else {
      if (cur) total += cur->second - cur->first;
      cur = std::pair{a, b};
    }
  }
  if (cur) total += cur->second - cur->first;
  return total;
}

// Bellman-Ford all-pairs distances on a weighted edge list.
struct WEdge {
  std::size_t u, v;
  Rational w;
};

inline std::vector<std::vector<std::optional<Rational>>> bellman_ford(std::size_t n,
                                                                      const std::vector<WEdge>& es) {
  std::vector<std::vector<std::optional<Rational>>> d(n, std::vector<std::optional<Rational>>(n));
  for (std::size_t s = 0; s < n; ++s) {
    d[s][s] = Rational(0);
    for (std::size_t round = 0; round < n; ++round)
      for (const auto& e : es)
        for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}})
          if (d[s][x] && (!d[s][y] || *d[s][x] + e.w < *d[s][y])) d[s][y] = *d[s][x] + e.w;
  }
  return d;
}

// Depth-first search for any admissible walk from a to b; multigraph given
// as an edge list. Returns true when one exists.
inline bool admissible_walk_exists(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& es,
                                   std::size_t a, std::size_t b) {
  std::vector<int> deg(n, 0), mult(es.size(), 0);
  for (auto [u, v] : es) {
    ++deg[u];
    ++deg[v];
  }
  std::size_t uncovered = es.size();
  std::function<bool(std::size_t, std::optional<std::size_t>)> go =
      [&](std::size_t v, std::optional<std::size_t> last) -> bool {
    if (v == b && uncovered == 0) return true;
    for (std::size_t e = 0; e < es.size(); ++e) {
      if (mult[e] == 2) continue;
      if (es[e].first != v && es[e].second != v) continue;
      if (last && *last == e && deg[v] == 2) continue;
      std::size_t w = es[e].first == v ? es[e].second : es[e].first;
      if (++mult[e] == 1) --uncovered;
      bool ok = go(w, e);
      if (--mult[e] == 0) ++uncovered;
      if (ok) return true;
    }
    return false;
  };
  return go(a, std::nullopt);
}

}  // namespace oracle

namespace oracle {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

struct SmallGraph {
  std::size_t n;
  EdgeList edges;
};

// All connected loop-free multigraphs with 1..max_edges edges and no
// isolated vertices, one per isomorphism class.
inline std::vector<SmallGraph> connected_multigraphs(std::size_t max_edges) {
  std::vector<SmallGraph> out;
  std::set<std::pair<std::size_t, EdgeList>> seen;
  for (std::size_t m = 1; m <= max_edges; ++m)
    for (std::size_t n = 2; n <= m + 1; ++n) {
      EdgeList pairs;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
      std::vector<std::size_t> pick(m, 0);
      for (;;) {
        EdgeList es;
        for (auto i : pick) es.push_back(pairs[i]);
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
          return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (auto [u, v] : es) parent[find(u)] = find(v);
        bool connected = true;
        for (std::size_t i = 0; i < n; ++i) connected = connected && find(i) == find(0);
        if (connected) {
          std::vector<std::size_t> perm(n);
          for (std::size_t i = 0; i < n; ++i) perm[i] = i;
          EdgeList best;
          do {
            EdgeList img;
            for (auto [u, v] : es) img.emplace_back(std::min(perm[u], perm[v]), std::max(perm[u], perm[v]));
            std::sort(img.begin(), img.end());
            if (best.empty() || img < best) best = img;
          } while (std::next_permutation(perm.begin(), perm.end()));
          if (seen.insert({n, best}).second) out.push_back({n, es});
        }
        // Next non-decreasing index tuple.
        std::size_t k = m;
        while (k > 0 && pick[k - 1] == pairs.size() - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t j = k; j < m; ++j) pick[j] = pick[k - 1];
      }
    }
  return out;
}

}  // namespace oracle
