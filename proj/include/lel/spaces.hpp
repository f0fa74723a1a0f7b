#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "lel/blueprint.hpp"
#include "lel/error.hpp"

namespace lel {

/// n edges at a hub. Leaves are numbered from 1; with cut set, the edge at
/// leaf a is the separating edge.
inline TowerBlueprint star(std::size_t n, std::size_t a_leaf = 1, std::size_t b_leaf = 2,
                           bool cut = false) {
  if (n < 2) throw ParameterError("star needs n >= 2");
  if (a_leaf < 1 || a_leaf > n || b_leaf < 1 || b_leaf > n)
    throw ParameterError("star leaves are numbered 1..n");
  TowerBlueprint bp;
  bp.name = "star" + std::to_string(n);
  bp.base.vertices.push_back("hub");
  for (std::size_t i = 1; i <= n; ++i) {
    bp.base.vertices.push_back("l" + std::to_string(i));
    bp.base.edges.push_back({"e" + std::to_string(i), "hub", "l" + std::to_string(i), std::nullopt});
  }
  bp.a = "l" + std::to_string(a_leaf);
  bp.b = "l" + std::to_string(b_leaf);
  if (cut) bp.cut_edge = "e" + std::to_string(a_leaf);
  bp.complete = true;
  validate(bp);
  return bp;
}

enum class OmegaEndpoints { leaves, hub };

/// The omega-star: level n is an (n+1)-star, each level blowing the hub up
/// into a fresh hub edge.
inline TowerBlueprint omega_star(std::size_t depth = 8,
                                 OmegaEndpoints endpoints = OmegaEndpoints::leaves) {
  if (depth < 1) throw ParameterError("depth must be >= 1");
  TowerBlueprint bp;
  bp.name = endpoints == OmegaEndpoints::hub ? "omega_star_hub" : "omega_star";
  bp.base.vertices = {"h1", "l1", "l2"};
  bp.base.edges = {{"e1", "h1", "l1", std::nullopt}, {"e2", "h1", "l2", std::nullopt}};
  bp.a = endpoints == OmegaEndpoints::hub ? "h1" : "l1";
  bp.b = endpoints == OmegaEndpoints::hub ? "h1" : "l2";
  for (std::size_t n = 2; n <= depth; ++n) {
    LevelSpec L;
    const std::string old_hub = "h" + std::to_string(n - 1), hub = "h" + std::to_string(n);
    const std::string leaf = "l" + std::to_string(n + 1);
    L.replaces = old_hub;
    L.graph.vertices = {hub, leaf};
    L.graph.edges = {{"e" + std::to_string(n + 1), hub, leaf, std::nullopt}};
    for (std::size_t e = 1; e <= n; ++e) L.attach.emplace_back("e" + std::to_string(e), hub);
    if (endpoints == OmegaEndpoints::hub) L.lift_a = L.lift_b = hub;
    bp.levels.push_back(std::move(L));
  }
  validate(bp);
  return bp;
}

/// Finite truncation of the chain of p-fold parallel blocks: level 1 has
/// 2*blocks blocks in a row from a to b; each deeper level blows up the
/// current b tip (even levels) or a tip (odd levels) into a new block.
inline TowerBlueprint chain_xp(std::size_t p, std::size_t depth = 5, std::size_t blocks = 2) {
  if (p < 3) throw ParameterError("chain_xp needs p >= 3");
  if (depth < 1 || blocks < 1) throw ParameterError("depth and blocks must be >= 1");
  TowerBlueprint bp;
  bp.name = "chain_x" + std::to_string(p);
  const std::size_t m = 2 * blocks;
  for (std::size_t k = 0; k <= m; ++k) bp.base.vertices.push_back("c" + std::to_string(k));
  for (std::size_t k = 1; k <= m; ++k)
    for (std::size_t j = 1; j <= p; ++j)
      bp.base.edges.push_back({"g" + std::to_string(k) + "_" + std::to_string(j),
                               "c" + std::to_string(k - 1), "c" + std::to_string(k), std::nullopt});
  bp.a = "c0";
  bp.b = "c" + std::to_string(m);
  std::string a_tip = bp.a, b_tip = bp.b;
  std::vector<std::string> a_edges, b_edges;
  for (std::size_t j = 1; j <= p; ++j) {
    a_edges.push_back("g1_" + std::to_string(j));
    b_edges.push_back("g" + std::to_string(m) + "_" + std::to_string(j));
  }
  for (std::size_t n = 2; n <= depth; ++n) {
    const bool b_side = n % 2 == 0;
    std::string& tip = b_side ? b_tip : a_tip;
    std::vector<std::string>& tip_edges = b_side ? b_edges : a_edges;
    const std::string tag = std::string(b_side ? "b" : "a") + std::to_string(n);
    LevelSpec L;
    L.replaces = tip;
    const std::string in = tag + "_in", out = tag + "_out";
    L.graph.vertices = {in, out};
    std::vector<std::string> fresh;
    for (std::size_t j = 1; j <= p; ++j) {
      fresh.push_back(tag + "_" + std::to_string(j));
      L.graph.edges.push_back({fresh.back(), in, out, std::nullopt});
    }
    for (const auto& e : tip_edges) L.attach.emplace_back(e, in);
    (b_side ? L.lift_b : L.lift_a) = out;
    tip = out;
    tip_edges = fresh;
    bp.levels.push_back(std::move(L));
  }
  validate(bp);
  return bp;
}

/// Depth-1 tower on a fixed graph.
inline TowerBlueprint graph_blueprint(const GraphSpec& g, const std::string& a,
                                      const std::string& b,
                                      std::optional<std::string> cut_edge = std::nullopt,
                                      std::string name = "graph") {
  TowerBlueprint bp;
  bp.name = std::move(name);
  bp.base = g;
  bp.a = a;
  bp.b = b;
  bp.cut_edge = std::move(cut_edge);
  bp.complete = true;
  validate(bp);
  return bp;
}

}  // namespace lel
