#pragma once

// JSON manifests, CSV tables and SVG plots. Rationals are written exactly as
// "p/q" strings; decimals appear only in CSV and SVG renderings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lel/blueprint.hpp"
#include "lel/lel_system.hpp"
#include "lel/metric_graph.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"
#include "lel/tower.hpp"
#include "lel/verify.hpp"

namespace lel {

using Json = nlohmann::ordered_json;

namespace json {

inline Json rat(const Rational& r) { return to_string(r); }
inline Json bracket(const Bracket& b) { return Json{{"lower", rat(b.lower)}, {"upper", rat(b.upper)}}; }
inline Json interval(const Interval& i) { return Json::array({rat(i.lo), rat(i.hi)}); }

template <class T, class F>
Json optional(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : Json(nullptr);
}

inline Json graph(const GraphSpec& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    Json j{{"name", e.name}, {"u", e.u}, {"v", e.v}};
    if (e.length) j["length"] = rat(*e.length);
    edges.push_back(j);
  }
  return Json{{"vertices", g.vertices}, {"edges", edges}};
}

}  // namespace json

/// Mirrors the text format section by section.
inline Json blueprint_json(const TowerBlueprint& bp) {
  Json levels = Json::array();
  for (std::size_t i = 0; i < bp.levels.size(); ++i) {
    const auto& l = bp.levels[i];
    Json attach = Json::array();
    for (const auto& [e, v] : l.attach) attach.push_back(Json::array({e, v}));
    Json j{{"level", i + 2}, {"replace", l.replaces}, {"graph", json::graph(l.graph)}, {"attach", attach}};
    if (l.lift_a) j["marker_a"] = *l.lift_a;
    if (l.lift_b) j["marker_b"] = *l.lift_b;
    levels.push_back(j);
  }
  Json flags = Json::array();
  if (bp.complete) flags.push_back("complete");
  return Json{{"name", bp.name},
              {"level_1", json::graph(bp.base)},
              {"a", bp.a},
              {"b", bp.b},
              {"cut", bp.cut_edge ? Json(*bp.cut_edge) : Json(nullptr)},
              {"flags", flags},
              {"levels", levels}};
}

inline Json tower_manifest(const Tower& t) {
  Json levels = Json::array();
  for (std::size_t n = 1; n <= t.depth(); ++n) {
    const auto& L = t.level(n);
    Json j{{"n", n},
           {"vertices", L.graph.vertex_count()},
           {"edges", L.graph.edge_count()},
           {"mu", json::rat(L.mu)},
           {"h1", json::rat(L.graph.total_length())},
           {"alpha", json::rat(L.g.domain().hi)},
           {"d_ab", json::rat(L.graph.vertex_distance(L.a, L.b))}};
    if (n >= 2) {
      j["replaced"] = t.level(n - 1).graph.vertex_name(L.replaced);
      j["visits"] = L.visits;
      j["replacement_h1"] = json::rat(L.replacement_length);
      j["replacement_bound"] = json::rat(L.replacement_bound);
    }
    levels.push_back(j);
  }
  auto ab = t.alpha_beta();
  return Json{{"blueprint", t.blueprint().name},
              {"q", json::rat(t.q())},
              {"depth", t.depth()},
              {"truncated", t.truncated()},
              {"tail", json::rat(t.tail())},
              {"levels", levels},
              {"limit", Json{{"h1", json::bracket(ab.h1)},
                             {"alpha", json::bracket(ab.alpha)},
                             {"beta", json::bracket(ab.beta)}}}};
}

inline Json constants_json(const LelConstants& c) {
  const auto& p = c.profile;
  return Json{{"rho", json::rat(p.rho)},     {"gamma", json::rat(p.gamma)}, {"Gamma", json::rat(p.Gamma)},
              {"L", json::rat(p.L)},         {"delta", json::rat(p.delta)}, {"q", json::rat(p.q)},
              {"k", c.k},                    {"l", c.l},                    {"L_rho", json::rat(c.L_rho)}};
}

inline Json system_manifest(const LelSystem& s) {
  const auto& n = s.core();
  auto e = s.endpoints();
  auto c = s.checks();
  return Json{
      {"blueprint", s.tower().blueprint().name},
      {"depth", s.tower().depth()},
      {"constants", constants_json(s.constants())},
      {"scale", n.scale_mode == Scale::unit_length ? "unit_length" : "unit_ab"},
      {"folded", n.folded},
      {"tail", json::rat(n.tau)},
      {"model", Json{{"c", json::rat(n.c_n)},
                     {"alpha", json::rat(n.alpha_n)},
                     {"beta", json::rat(n.beta_n)},
                     {"beta_star", json::rat(n.beta_star_n)},
                     {"d_ab", json::rat(n.dab_n)}}},
      {"limit", Json{{"c", json::bracket(n.c)},
                     {"alpha", json::bracket(n.alpha)},
                     {"beta", json::bracket(n.beta)},
                     {"beta_star", json::bracket(n.beta_star)},
                     {"d_ab", json::bracket(n.dab)}}},
      {"normalized", Json{{"h1", json::bracket(n.h1_total())}, {"d_ab", json::bracket(n.d_ab())}}},
      {"lipschitz", Json{{"phi", json::bracket(s.lip_phi())}, {"psi", json::bracket(s.lip_psi())}}},
      {"endpoints", Json{{"phi_0_is_a", e.phi_0_is_a},
                         {"phi_1_is_b", e.phi_1_is_b},
                         {"psi_a_is_0", e.psi_a_is_0},
                         {"psi_b_is_1", json::optional(e.psi_b_is_1, [](bool b) { return Json(b); })},
                         {"d_ab_above_half", json::optional(e.d_ab_above_half, [](bool b) { return Json(b); })},
                         {"ok", e.ok()}}},
      {"checks", Json{{"h1_in_range", c.h1_in_range},
                      {"alpha_in_range", c.alpha_in_range},
                      {"beta_in_range", c.beta_in_range},
                      {"lip_phi0", c.lip_phi0},
                      {"lip_psi0", c.lip_psi0},
                      {"required", c.required()}}},
      {"factor", Json{{"pieces", s.interval_factor().piece_count()},
                      {"laps", lap_count(s.interval_factor())},
                      {"error", json::rat(s.factor_error())}}}};
}

inline Json between_manifest(const BetweenMap& f) {
  return Json{{"source", f.src().tower().blueprint().name},
              {"target", f.dst().tower().blueprint().name},
              {"rho", json::rat(f.rho())},
              {"L", json::rat(f.lipschitz_constant())},
              {"lipschitz", json::bracket(f.lip())},
              {"maps_a_to_a", f.maps_a_to_a()},
              {"maps_b_to_b", json::optional(f.maps_b_to_b(), [](bool b) { return Json(b); })}};
}

inline Json report_json(const ExactnessReport& r) {
  return Json{{"suite", "exact"},
              {"eps", json::rat(r.eps)},
              {"intervals", r.intervals},
              {"max_steps", r.max_steps},
              {"bound", r.bound},
              {"histogram", r.histogram},
              {"witness", json::optional(r.witness, json::interval)},
              {"verdict", to_string(r.verdict)}};
}

inline Json report_json(const PeriodicReport& r) {
  Json uncovered = Json::array(), samples = Json::array();
  for (const auto& y : r.uncovered) uncovered.push_back(json::rat(y));
  for (const auto& [x, p] : r.samples) samples.push_back(Json{{"point", json::rat(x)}, {"period", p}});
  return Json{{"suite", "periodic"},
              {"eps", json::rat(r.eps)},
              {"n_max", r.n_max},
              {"grid_points", r.grid_points},
              {"covered_at_period", r.covered_at},
              {"fixed_components", r.period_one_points},
              {"uncovered", uncovered},
              {"samples", samples},
              {"budget_hit", r.budget_hit},
              {"verdict", to_string(r.verdict)}};
}

inline Json report_json(const EntropyReport& r) {
  Json j{{"suite", "entropy"},
         {"laps", r.laps},
         {"lap_estimates", r.lap_estimates},
         {"truncated", r.truncated},
         {"log_lip_upper", r.log_lip_upper},
         {"expansion_lower", r.expansion_lower},
         {"estimates_below_lip", r.estimates_below_lip},
         {"verdict", to_string(r.verdict)}};
  if (r.example_bound) j["example_bound"] = *r.example_bound;
  return j;
}

inline Json report_json(const LelReport& r) {
  return Json{{"suite", "lel"},
              {"map", r.map},
              {"rho", json::rat(r.rho)},
              {"L", json::rat(r.L)},
              {"trials", r.trials},
              {"passes", r.passes},
              {"onto", r.onto},
              {"fails", r.fails},
              {"inconclusive", r.inconclusive},
              {"inconclusive_rate", r.inconclusive_rate()},
              {"suggested_extra_levels", r.suggested_extra_levels},
              {"worst_ratio", json::optional(r.worst_ratio, json::rat)},
              {"witness", json::optional(r.witness, json::interval)},
              {"lipschitz", Json{{"certified", json::rat(r.lip_certified)},
                                 {"sampled", json::rat(r.lip_sampled)},
                                 {"pairs", r.lip_pairs},
                                 {"ok", r.lip_ok}}},
              {"verdict", to_string(r.verdict)}};
}

inline Json report_json(const NegativeReport& r) {
  return Json{{"suite", "negative"},
              {"p", r.p},
              {"L", json::rat(r.L)},
              {"skipped", r.skipped},
              {"h1", json::bracket(r.h1)},
              {"d_ab", json::bracket(r.d_ab)},
              {"h1_vs_dab", r.h1_vs_dab},
              {"psi_b_model", json::rat(r.psi0_b_model)},
              {"psi_b_upper", json::rat(r.psi0_b_upper)},
              {"bound", json::rat(r.bound)},
              {"psi_b_below_one", r.psi_b_below_one},
              {"verdict", to_string(r.verdict)}};
}

// ------------------------------------------------------------------ CSV

inline std::string decimal(const Rational& r, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << r.get_d();
  return os.str();
}

inline void write_csv(std::ostream& os, const ExactnessReport& r) {
  os << "steps,intervals\n";
  for (std::size_t n = 0; n < r.histogram.size(); ++n) os << n << ',' << r.histogram[n] << '\n';
}

inline void write_csv(std::ostream& os, const PeriodicReport& r) {
  os << "period,grid_points_covered\n";
  for (std::size_t n = 0; n < r.covered_at.size(); ++n) os << n + 1 << ',' << r.covered_at[n] << '\n';
}

inline void write_csv(std::ostream& os, const EntropyReport& r) {
  os << "n,laps,estimate\n";
  for (std::size_t i = 0; i < r.laps.size(); ++i)
    os << i + 1 << ',' << r.laps[i] << ',' << std::setprecision(12) << r.lap_estimates[i] << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<LelReport>& rs) {
  os << "map,rho,L,trials,passes,onto,fails,inconclusive,lip_certified,lip_sampled,verdict\n";
  for (const auto& r : rs)
    os << r.map << ',' << to_string(r.rho) << ',' << to_string(r.L) << ',' << r.trials << ',' << r.passes << ','
       << r.onto << ',' << r.fails << ',' << r.inconclusive << ',' << to_string(r.lip_certified) << ','
       << to_string(r.lip_sampled) << ',' << to_string(r.verdict) << '\n';
}

inline std::string describe(const MetricGraph& g, const GraphPoint& p) {
  if (p.is_vertex()) return g.vertex_name(p.vertex);
  return g.edge(p.edge).name + "@" + to_string(p.offset);
}

/// One row per orbit point: step, location, distance to a.
inline void write_orbit_csv(std::ostream& os, const MetricGraph& g, std::size_t a,
                            const std::vector<GraphPoint>& orbit) {
  os << "step,point,d_a,d_a_decimal\n";
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    Rational d = distance(g, GraphPoint::at_vertex(a), orbit[i]);
    os << i << ',' << describe(g, orbit[i]) << ',' << to_string(d) << ',' << decimal(d) << '\n';
  }
}

// ------------------------------------------------------------------ SVG

namespace detail {

inline std::string num(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << x;
  return os.str();
}

}  // namespace detail

/// Graph of a PL map as a polyline over its breakpoints.
inline void write_svg(std::ostream& os, const PLMap& f, double size = 480) {
  const double pad = 20;
  Interval d = f.domain(), c = f.codomain();
  double dx = d.length().get_d(), dy = c.length().get_d();
  auto X = [&](const Rational& x) { return pad + Rational(x - d.lo).get_d() / dx * size; };
  auto Y = [&](const Rational& y) { return pad + size - Rational(y - c.lo).get_d() / dy * size; };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(size + 2 * pad) << "\" height=\""
     << detail::num(size + 2 * pad) << "\">\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << size << "\" height=\"" << size
     << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"0.6\" points=\"";
  for (std::size_t i = 0; i < f.xs().size(); ++i)
    os << (i ? " " : "") << detail::num(X(f.xs()[i])) << ',' << detail::num(Y(f.ys()[i]));
  os << "\"/>\n</svg>\n";
}

/// Tree embedding from vertex root: depth is the radius, leaves share the
/// angle evenly. Non-tree edges are drawn as chords. Labels give lengths.
inline void write_svg(std::ostream& os, const MetricGraph& g, std::size_t root, double size = 480) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> parent(n, npos), depth(n, 0), parent_edge(n, npos);
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<bool> seen(n, false), tree_edge(g.edge_count(), false);
  std::queue<std::size_t> bfs;
  bfs.push(root);
  seen[root] = true;
  while (!bfs.empty()) {
    std::size_t v = bfs.front();
    bfs.pop();
    for (std::size_t e : g.incident(v)) {
      std::size_t w = g.other_end(e, v);
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      parent_edge[w] = e;
      tree_edge[e] = true;
      depth[w] = depth[v] + 1;
      children[v].push_back(w);
      bfs.push(w);
    }
  }
  std::vector<double> leaves(n, 0), angle(n, 0);
  std::size_t max_depth = 1;
  for (std::size_t v = 0; v < n; ++v) max_depth = std::max(max_depth, depth[v]);
  std::function<double(std::size_t)> count = [&](std::size_t v) {
    double s = children[v].empty() ? 1 : 0;
    for (std::size_t c : children[v]) s += count(c);
    return leaves[v] = s;
  };
  count(root);
  const double two_pi = 6.283185307179586;
  std::function<void(std::size_t, double)> place = [&](std::size_t v, double start) {
    angle[v] = start + leaves[v] / leaves[root] * two_pi / 2;
    for (std::size_t c : children[v]) {
      place(c, start);
      start += leaves[c] / leaves[root] * two_pi;
    }
  };
  place(root, 0);
  const double mid = size / 2, step = (size / 2 - 30) / static_cast<double>(max_depth);
  auto px = [&](std::size_t v) { return mid + step * static_cast<double>(depth[v]) * std::cos(angle[v]); };
  auto py = [&](std::size_t v) { return mid + step * static_cast<double>(depth[v]) * std::sin(angle[v]); };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(size) << "\" height=\""
     << detail::num(size) << "\" font-family=\"monospace\" font-size=\"8\">\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& E = g.edge(e);
    double x1 = px(E.u), y1 = py(E.u), x2 = px(E.v), y2 = py(E.v);
    if (E.u == E.v || !tree_edge[e]) {
      // Loops and parallel edges bulge outward from the centre.
      double cx = (x1 + x2) / 2 + (x1 + x2 - 2 * mid) / 4 + 12, cy = (y1 + y2) / 2 + (y1 + y2 - 2 * mid) / 4 + 12;
      os << "<path d=\"M" << detail::num(x1) << ',' << detail::num(y1) << " Q" << detail::num(cx) << ','
         << detail::num(cy) << ' ' << detail::num(x2) << ',' << detail::num(y2)
         << "\" fill=\"none\" stroke=\"#555\"/>\n";
      os << "<text x=\"" << detail::num(cx) << "\" y=\"" << detail::num(cy) << "\">" << E.name << ' '
         << to_string(E.length) << "</text>\n";
    } else {
      os << "<line x1=\"" << detail::num(x1) << "\" y1=\"" << detail::num(y1) << "\" x2=\"" << detail::num(x2)
         << "\" y2=\"" << detail::num(y2) << "\" stroke=\"#222\"/>\n";
      os << "<text x=\"" << detail::num((x1 + x2) / 2) << "\" y=\"" << detail::num((y1 + y2) / 2) << "\">"
         << E.name << ' ' << to_string(E.length) << "</text>\n";
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    os << "<circle cx=\"" << detail::num(px(v)) << "\" cy=\"" << detail::num(py(v)) << "\" r=\"2\"/>\n"
       << "<text x=\"" << detail::num(px(v) + 3) << "\" y=\"" << detail::num(py(v) - 3) << "\">"
       << g.vertex_name(v) << "</text>\n";
  os << "</svg>\n";
}

}  // namespace lel
