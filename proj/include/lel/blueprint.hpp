#pragma once

// Line-oriented tower description.
//
//   name <word>
//   flags cut <edge>          level-1 edge separating a from b
//   flags complete            the tower stops after the last level
//   [level 1]
//   vertex <v> [<v> ...]
//   edge <id> <u> <v> [length <p/q>]
//   marker a <v>
//   marker b <v>
//   [level n]                 n >= 2, consecutive
//   replace <vertex of level n-1>
//   vertex ...                vertices of the replacement graph
//   edge ...                  its edges (no lengths past level 1)
//   attach <edge> <v>         one line per edge incident to the replaced vertex
//   marker a|b <v>            lift, required when a or b is replaced
//
// '#' starts a comment.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lel/error.hpp"
#include "lel/metric_graph.hpp"
#include "lel/rational.hpp"

namespace lel {

struct GraphSpec {
  struct Edge {
    std::string name;
    std::string u;
    std::string v;
    std::optional<Rational> length;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

struct LevelSpec {
  std::string replaces;
  GraphSpec graph;
  std::vector<std::pair<std::string, std::string>> attach;
  std::optional<std::string> lift_a;
  std::optional<std::string> lift_b;
  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct TowerBlueprint {
  std::string name;
  GraphSpec base;
  std::string a;
  std::string b;
  std::optional<std::string> cut_edge;
  bool complete = false;
  std::vector<LevelSpec> levels;  // levels[i] describes level i + 2

  std::size_t depth() const { return levels.size() + 1; }
  friend bool operator==(const TowerBlueprint&, const TowerBlueprint&) = default;
};

namespace detail {

inline std::vector<std::string> split_words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
          c == '\''))
      return false;
  return true;
}

}  // namespace detail

/// Builds the metric graph of a spec with unit placeholder lengths, or with
/// the given lengths when every edge carries one.
inline MetricGraph graph_from_spec(const GraphSpec& spec) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
    if (!index.emplace(spec.vertices[i], i).second)
      throw BlueprintError("duplicate vertex " + spec.vertices[i]);
  }
  std::vector<EdgeSpec> edges;
  for (const auto& e : spec.edges) {
    auto u = index.find(e.u), v = index.find(e.v);
    if (u == index.end()) throw BlueprintError("edge " + e.name + ": unknown vertex " + e.u);
    if (v == index.end()) throw BlueprintError("edge " + e.name + ": unknown vertex " + e.v);
    if (u->second == v->second) throw BlueprintError("edge " + e.name + " is a loop");
    edges.push_back({e.name, u->second, v->second, e.length.value_or(Rational(1))});
  }
  try {
    return MetricGraph(spec.vertices, std::move(edges));
  } catch (const ConstructionError& err) {
    throw BlueprintError(err.what());
  }
}

/// Checks every structural requirement; throws BlueprintError naming the problem.
inline void validate(const TowerBlueprint& bp) {
  std::set<std::string> all_vertices, all_edges;
  auto claim = [](std::set<std::string>& pool, const std::string& n, const char* what) {
    if (!detail::valid_name(n)) throw BlueprintError(std::string("bad ") + what + " name '" + n + "'");
    if (!pool.insert(n).second) throw BlueprintError(std::string("duplicate ") + what + " " + n);
  };
  for (const auto& v : bp.base.vertices) claim(all_vertices, v, "vertex");
  for (const auto& e : bp.base.edges) claim(all_edges, e.name, "edge");
  if (bp.base.edges.empty()) throw BlueprintError("level 1 has no edges");
  std::size_t with_len = 0;
  for (const auto& e : bp.base.edges) {
    if (e.length) {
      ++with_len;
      if (*e.length <= 0) throw BlueprintError("edge " + e.name + " has non-positive length");
    }
  }
  if (with_len != 0 && with_len != bp.base.edges.size())
    throw BlueprintError("either all level-1 edges carry lengths or none do");
  MetricGraph g = graph_from_spec(bp.base);
  auto a = g.find_vertex(bp.a), b = g.find_vertex(bp.b);
  if (bp.a.empty() || !a) throw BlueprintError("marker a missing or unknown");
  if (bp.b.empty() || !b) throw BlueprintError("marker b missing or unknown");
  if (bp.cut_edge) {
    auto ce = g.find_edge(*bp.cut_edge);
    if (!ce) throw BlueprintError("cut edge " + *bp.cut_edge + " is not a level-1 edge");
    Topology t = g.topology();
    t.edges.erase(t.edges.begin() + static_cast<long>(*ce));
    auto inc = t.incidence();
    std::vector<bool> seen(t.vertex_count, false);
    std::vector<std::size_t> todo{*a};
    seen[*a] = true;
    while (!todo.empty()) {
      std::size_t v = todo.back();
      todo.pop_back();
      for (std::size_t e : inc[v]) {
        std::size_t w = t.edges[e].first == v ? t.edges[e].second : t.edges[e].first;
        if (!seen[w]) {
          seen[w] = true;
          todo.push_back(w);
        }
      }
    }
    if (seen[*b]) throw BlueprintError("cut edge " + *bp.cut_edge + " does not separate a from b");
  }

  // Track the current level's vertex names and their incident edges.
  std::set<std::string> current_vertices(bp.base.vertices.begin(), bp.base.vertices.end());
  std::map<std::string, std::pair<std::string, std::string>> current_edges;
  for (const auto& e : bp.base.edges) current_edges[e.name] = {e.u, e.v};
  std::string a_now = bp.a, b_now = bp.b;
  for (std::size_t i = 0; i < bp.levels.size(); ++i) {
    const auto& L = bp.levels[i];
    const std::string where = "level " + std::to_string(i + 2) + ": ";
    if (!current_vertices.count(L.replaces))
      throw BlueprintError(where + "replaced vertex " + L.replaces + " is not a vertex of level " +
                           std::to_string(i + 1));
    for (const auto& v : L.graph.vertices) claim(all_vertices, v, "vertex");
    for (const auto& e : L.graph.edges) {
      claim(all_edges, e.name, "edge");
      if (e.length) throw BlueprintError(where + "edge " + e.name + ": lengths are derived past level 1");
    }
    if (L.graph.edges.empty()) throw BlueprintError(where + "replacement graph has no edges");
    graph_from_spec(L.graph);
    std::set<std::string> fresh(L.graph.vertices.begin(), L.graph.vertices.end());
    std::set<std::string> incident;
    for (const auto& [name, ends] : current_edges)
      if (ends.first == L.replaces || ends.second == L.replaces) incident.insert(name);
    std::set<std::string> attached;
    for (const auto& [edge, vertex] : L.attach) {
      if (!incident.count(edge))
        throw BlueprintError(where + "attach names edge " + edge + ", which is not incident to " +
                             L.replaces);
      if (!attached.insert(edge).second)
        throw BlueprintError(where + "edge " + edge + " attached twice");
      if (!fresh.count(vertex))
        throw BlueprintError(where + "edge " + edge + " attached to " + vertex +
                             ", which is not a replacement vertex");
    }
    for (const auto& e : incident)
      if (!attached.count(e)) throw BlueprintError(where + "edge " + e + " has no attachment");
    auto check_lift = [&](const std::optional<std::string>& lift, const std::string& marker,
                          const char* label) {
      if (marker == L.replaces) {
        if (!lift) throw BlueprintError(where + "marker " + label + " is replaced and needs a lift");
        if (!fresh.count(*lift))
          throw BlueprintError(where + "lift of " + label + " is not a replacement vertex");
      } else if (lift) {
        throw BlueprintError(where + "marker " + label + " is not replaced and cannot be lifted");
      }
    };
    check_lift(L.lift_a, a_now, "a");
    check_lift(L.lift_b, b_now, "b");
    if (a_now == L.replaces) a_now = *L.lift_a;
    if (b_now == L.replaces) b_now = *L.lift_b;
    std::map<std::string, std::string> att(L.attach.begin(), L.attach.end());
    for (auto& [name, ends] : current_edges) {
      if (ends.first == L.replaces) ends.first = att[name];
      if (ends.second == L.replaces) ends.second = att[name];
    }
    for (const auto& e : L.graph.edges) current_edges[e.name] = {e.u, e.v};
    current_vertices.erase(L.replaces);
    current_vertices.insert(fresh.begin(), fresh.end());
  }
}

inline TowerBlueprint parse_blueprint(std::istream& in) {
  TowerBlueprint bp;
  int level = 0;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> header_line;
  auto graph = [&]() -> GraphSpec& { return level == 1 ? bp.base : bp.levels.back().graph; };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto w = detail::split_words(line);
    if (w.empty()) continue;
    auto fail = [&](const std::string& msg) -> void { throw BlueprintError(msg, lineno); };
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (w.size() < lo || w.size() > hi) fail("wrong number of fields for '" + w[0] + "'");
    };
    auto need_level = [&]() {
      if (level == 0) fail("'" + w[0] + "' outside a [level n] section");
    };
    if (w[0].front() == '[') {
      std::string joined;
      for (const auto& s : w) joined += s + " ";
      joined.pop_back();
      if (joined.size() < 9 || joined.substr(0, 7) != "[level " || joined.back() != ']')
        fail("bad section header '" + joined + "'");
      std::string num = joined.substr(7, joined.size() - 8);
      int n = 0;
      try {
        std::size_t used = 0;
        n = std::stoi(num, &used);
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        fail("bad level number '" + num + "'");
      }
      if (n != level + 1) fail("expected [level " + std::to_string(level + 1) + "]");
      level = n;
      if (level >= 2) {
        bp.levels.emplace_back();
        header_line.push_back(lineno);
      }
    } else if (w[0] == "name") {
      need(2, 2);
      bp.name = w[1];
    } else if (w[0] == "flags") {
      need(2, 3);
      if (w[1] == "cut") {
        need(3, 3);
        if (bp.cut_edge) fail("cut edge given twice");
        bp.cut_edge = w[2];
      } else if (w[1] == "complete") {
        need(2, 2);
        bp.complete = true;
      } else {
        fail("unknown flag '" + w[1] + "'");
      }
    } else if (w[0] == "vertex") {
      need_level();
      if (w.size() < 2) fail("vertex needs a name");
      for (std::size_t i = 1; i < w.size(); ++i) graph().vertices.push_back(w[i]);
    } else if (w[0] == "edge") {
      need_level();
      if (w.size() != 4 && w.size() != 6) fail("edge needs <id> <u> <v> [length <p/q>]");
      GraphSpec::Edge e{w[1], w[2], w[3], std::nullopt};
      if (w.size() == 6) {
        if (w[4] != "length") fail("expected 'length', got '" + w[4] + "'");
        e.length = parse_rational(w[5]);
        if (!e.length) fail("bad rational '" + w[5] + "'");
      }
      graph().edges.push_back(std::move(e));
    } else if (w[0] == "marker") {
      need_level();
      need(3, 3);
      if (w[1] != "a" && w[1] != "b") fail("marker must be a or b");
      if (level == 1) {
        std::string& slot = w[1] == "a" ? bp.a : bp.b;
        if (!slot.empty()) fail("marker " + w[1] + " given twice");
        slot = w[2];
      } else {
        auto& slot = w[1] == "a" ? bp.levels.back().lift_a : bp.levels.back().lift_b;
        if (slot) fail("lift of " + w[1] + " given twice");
        slot = w[2];
      }
    } else if (w[0] == "replace") {
      need(2, 2);
      if (level < 2) fail("'replace' belongs to levels >= 2");
      if (!bp.levels.back().replaces.empty()) fail("replace given twice");
      bp.levels.back().replaces = w[1];
    } else if (w[0] == "attach") {
      need(3, 3);
      if (level < 2) fail("'attach' belongs to levels >= 2");
      bp.levels.back().attach.emplace_back(w[1], w[2]);
    } else {
      fail("unknown directive '" + w[0] + "'");
    }
  }
  if (level == 0) throw BlueprintError("no [level 1] section", lineno);
  for (std::size_t i = 0; i < bp.levels.size(); ++i)
    if (bp.levels[i].replaces.empty())
      throw BlueprintError("level " + std::to_string(i + 2) + " has no 'replace' line", header_line[i]);
  return bp;
}

inline TowerBlueprint parse_blueprint_string(const std::string& text) {
  std::istringstream is(text);
  return parse_blueprint(is);
}

inline std::string serialize_blueprint(const TowerBlueprint& bp) {
  std::ostringstream os;
  if (!bp.name.empty()) os << "name " << bp.name << '\n';
  if (bp.cut_edge) os << "flags cut " << *bp.cut_edge << '\n';
  if (bp.complete) os << "flags complete\n";
  auto graph = [&](const GraphSpec& g) {
    if (!g.vertices.empty()) {
      os << "vertex";
      for (const auto& v : g.vertices) os << ' ' << v;
      os << '\n';
    }
    for (const auto& e : g.edges) {
      os << "edge " << e.name << ' ' << e.u << ' ' << e.v;
      if (e.length) os << " length " << to_string(*e.length);
      os << '\n';
    }
  };
  os << "[level 1]\n";
  graph(bp.base);
  if (!bp.a.empty()) os << "marker a " << bp.a << '\n';
  if (!bp.b.empty()) os << "marker b " << bp.b << '\n';
  for (std::size_t i = 0; i < bp.levels.size(); ++i) {
    const auto& L = bp.levels[i];
    os << "[level " << i + 2 << "]\n";
    os << "replace " << L.replaces << '\n';
    graph(L.graph);
    for (const auto& [e, v] : L.attach) os << "attach " << e << ' ' << v << '\n';
    if (L.lift_a) os << "marker a " << *L.lift_a << '\n';
    if (L.lift_b) os << "marker b " << *L.lift_b << '\n';
  }
  return os.str();
}

}  // namespace lel
