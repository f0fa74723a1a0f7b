// lelctl: build towers and LEL systems from blueprint files, run the
// verification suites, iterate orbits and plot.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lel/lel.hpp"

namespace fs = std::filesystem;
using namespace lel;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitFail;
}

struct Common {
  std::string blueprint;
  std::size_t depth = 5;
  std::string q = "1/128";
  std::string rho = "2";
  std::string profile;
  std::string out;
};

Rational parse_arg(const std::string& name, const std::string& text) {
  auto r = parse_rational(text);
  if (!r) throw ParameterError(name + ": not a rational: " + text);
  return *r;
}

TowerBlueprint load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BlueprintError("cannot open " + path);
  return parse_blueprint(in);
}

/// key=value pairs over the default profile.
ConstantsProfile profile_from(const Common& c) {
  ConstantsProfile p;
  p.q = parse_arg("--q", c.q);
  p.rho = parse_arg("--rho", c.rho);
  std::stringstream ss(c.profile);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("--profile entries are key=value: " + item);
    std::string key = item.substr(0, eq);
    Rational v = parse_arg("--profile " + key, item.substr(eq + 1));
    if (key == "gamma") p.gamma = v;
    else if (key == "Gamma") p.Gamma = v;
    else if (key == "L") p.L = v;
    else if (key == "delta") p.delta = v;
    else throw ParameterError("--profile: unknown key " + key);
  }
  validate(p);
  return p;
}

std::shared_ptr<const Tower> tower_for(const Common& c, const std::string& path) {
  if (c.depth < 1) throw ParameterError("--depth must be >= 1");
  return std::make_shared<const Tower>(Tower::expand(load(path), {parse_arg("--q", c.q), c.depth}));
}

std::shared_ptr<const LelSystem> system_for(const Common& c, const std::string& path) {
  ConstantsProfile p = profile_from(c);
  return std::make_shared<const LelSystem>(assemble(tower_for(c, path), choose_constants(p.rho, p)));
}

std::optional<fs::path> report_dir(const Common& c) {
  if (!c.out.empty()) return fs::path(c.out);
  if (const char* env = std::getenv("LEL_REPORT_DIR"); env && *env) return fs::path(env);
  return std::nullopt;
}

void write_file(const Common& c, const std::string& name, const std::string& body) {
  auto dir = report_dir(c);
  if (!dir) return;
  fs::create_directories(*dir);
  std::ofstream out(*dir / name, std::ios::binary);
  out << body;
  if (!out) throw ResourceError("cannot write " + (*dir / name).string());
}

void emit_json(const Common& c, const std::string& name, const Json& j) {
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  write_file(c, name, text);
}

// ------------------------------------------------------------- commands

int cmd_build(const Common& c) {
  auto t = tower_for(c, c.blueprint);
  emit_json(c, "tower.json", tower_manifest(*t));
  return kExitPass;
}

int cmd_maps(const Common& c, const std::string& between) {
  auto s = system_for(c, c.blueprint);
  Json j = system_manifest(*s);
  if (!between.empty()) j["between"] = between_manifest(BetweenMap(s, system_for(c, between)));
  emit_json(c, "system.json", j);
  auto e = s->endpoints();
  if (e.phi_0_is_a && e.phi_1_is_b && e.psi_a_is_0 && e.psi_b_is_1.value_or(true) &&
      !e.d_ab_above_half.value_or(true)) {
    std::cerr << "d(a,b) bracket does not clear 1/2; raise --depth\n";
    return kExitInconclusive;
  }
  return e.ok() ? kExitPass : kExitFail;
}

struct VerifyOptions {
  std::string suite = "lel";
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  unsigned eps_bits = 10;
  std::size_t n_max = 8;
  std::size_t laps = 3;
  std::size_t p = 4;
  std::string L;
  long example_k = 0;
};

int cmd_verify(const Common& c, const VerifyOptions& o) {
  const std::string& suite = o.suite;
  if (suite == "negative") {
    ConstantsProfile p = profile_from(c);
    Rational L = o.L.empty() ? p.L : parse_arg("--L", o.L);
    auto r = negative_suite_Xp(o.p, L, c.depth, p.q);
    emit_json(c, "negative.json", report_json(r));
    std::ostringstream csv;
    csv << "p,L,psi_b_model,psi_b_upper,bound,verdict\n"
        << r.p << ',' << to_string(r.L) << ',' << to_string(r.psi0_b_model) << ','
        << to_string(r.psi0_b_upper) << ',' << to_string(r.bound) << ',' << to_string(r.verdict) << '\n';
    write_file(c, "negative.csv", csv.str());
    return exit_code(r.verdict);
  }
  if (c.blueprint.empty()) throw ParameterError("suite " + suite + " needs a blueprint");
  auto s = system_for(c, c.blueprint);
  const auto& prof = s->constants().profile;
  std::ostringstream csv;
  Json j;
  Verdict v = Verdict::pass;
  if (suite == "lel") {
    auto self = std::make_shared<const BetweenMap>(self_map(s));
    std::vector<LelReport> rs{certify_lel(phi_view(s), o.seed, o.trials),
                              certify_lel(psi_view(s), o.seed, o.trials),
                              certify_lel(between_view(self), o.seed, o.trials)};
    j = Json{{"suite", "lel"}, {"system", system_manifest(*s)}, {"maps", Json::array()}};
    for (const auto& r : rs) {
      j["maps"].push_back(report_json(r));
      v = worst(v, r.verdict);
    }
    j["verdict"] = to_string(v);
    write_csv(csv, rs);
  } else if (suite == "exact") {
    Rational eps = pow(Rational(1, 2), o.eps_bits);
    auto r = check_exactness(s->interval_factor(), eps, exactness_step_bound(prof.gamma, prof.rho, eps));
    j = report_json(r);
    v = r.verdict;
    write_csv(csv, r);
  } else if (suite == "periodic") {
    auto r = check_dense_periodic(s->interval_factor(), pow(Rational(1, 2), o.eps_bits), o.n_max);
    j = report_json(r);
    Json in_space = Json::array();
    for (const auto& [t, n] : r.samples)
      if (exhibit_periodic_in_space(*s, t, n))
        in_space.push_back(Json{{"point", describe(s->core().top().graph, s->phi_model(t))}, {"period", n}});
    j["periodic_in_space"] = in_space;
    v = r.verdict;
    write_csv(csv, r);
  } else if (suite == "entropy") {
    Rational lip = s->lip_phi().upper * s->lip_psi().upper;
    auto r = entropy_report(s->interval_factor(), o.laps, lip, s->rho());
    if (o.example_k) r.example_bound = omega_star_small_entropy(o.example_k, s->constants(), c.depth).entropy_bound;
    j = report_json(r);
    v = r.verdict;
    write_csv(csv, r);
  } else {
    throw ParameterError("unknown suite " + suite);
  }
  emit_json(c, suite + ".json", j);
  write_file(c, suite + ".csv", csv.str());
  return exit_code(v);
}

GraphPoint start_point(const MetricGraph& g, const TowerLevel& top, const std::string& name) {
  if (name == "a") return GraphPoint::at_vertex(top.a);
  if (name == "b") return GraphPoint::at_vertex(top.b);
  if (auto v = g.find_vertex(name)) return GraphPoint::at_vertex(*v);
  throw ParameterError("--start: no vertex " + name);
}

int cmd_iterate(const Common& c, const std::string& start, const std::string& param, std::size_t steps) {
  auto s = system_for(c, c.blueprint);
  const auto& top = s->core().top();
  GraphPoint x = param.empty() ? start_point(top.graph, top, start) : s->phi_model(parse_arg("--param", param));
  BetweenMap f = self_map(s);
  std::vector<GraphPoint> orbit;
  for (std::size_t i = 0; i < steps; ++i) {
    orbit.push_back(x);
    x = f.model(x);
  }
  std::ostringstream csv;
  write_orbit_csv(csv, top.graph, top.a, orbit);
  std::cout << csv.str();
  write_file(c, "orbit.csv", csv.str());
  return kExitPass;
}

int cmd_plot(const Common& c, const std::string& what, std::size_t level, const std::string& file) {
  std::ostringstream svg;
  if (what == "graph") {
    auto t = tower_for(c, c.blueprint);
    std::size_t n = level ? level : t->depth();
    if (n > t->depth()) throw ParameterError("--level beyond the built depth");
    const auto& L = t->level(n);
    write_svg(svg, L.graph, L.a);
  } else if (what == "factor" || what == "lambda") {
    auto s = system_for(c, c.blueprint);
    write_svg(svg, what == "factor" ? s->interval_factor() : s->core().lambda);
  } else {
    throw ParameterError("--what must be graph, factor or lambda");
  }
  if (!file.empty()) {
    std::ofstream out(file, std::ios::binary);
    out << svg.str();
  } else if (report_dir(c)) {
    write_file(c, what + ".svg", svg.str());
  } else {
    std::cout << svg.str();
  }
  return kExitPass;
}

void add_common(CLI::App* sub, Common& c, bool need_blueprint = true) {
  auto* bp = sub->add_option("blueprint", c.blueprint, "blueprint file");
  if (need_blueprint) bp->required()->check(CLI::ExistingFile);
  sub->add_option("--depth", c.depth, "levels to build")->capture_default_str();
  sub->add_option("--q", c.q, "length ratio q")->capture_default_str();
  sub->add_option("--rho", c.rho, "expansion factor rho")->capture_default_str();
  sub->add_option("--profile", c.profile, "overrides, e.g. gamma=2/5,Gamma=25,L=3,delta=1/10");
  sub->add_option("--out", c.out, "report directory (default: $LEL_REPORT_DIR)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Towers of graphs and LEL maps on their limits"};
  app.require_subcommand(1);
  Common c;
  std::string between, start = "a", param, what = "graph", file;
  std::size_t steps = 20, level = 0;
  VerifyOptions vo;

  auto* build = app.add_subcommand("build", "expand a blueprint and print the tower manifest");
  add_common(build, c);
  auto* maps = app.add_subcommand("maps", "assemble phi and psi and print the system manifest");
  add_common(maps, c);
  maps->add_option("--between", between, "target blueprint for a between-map")->check(CLI::ExistingFile);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, c, false);
  verify->add_option("--suite", vo.suite, "lel, exact, periodic, entropy or negative")
      ->check(CLI::IsMember({"lel", "exact", "periodic", "entropy", "negative"}))
      ->capture_default_str();
  verify->add_option("--seed", vo.seed, "sampler seed")->capture_default_str();
  verify->add_option("--trials", vo.trials, "sampled members per map")->capture_default_str();
  verify->add_option("--eps-bits", vo.eps_bits, "grid spacing 2^-m")->capture_default_str();
  verify->add_option("--n-max", vo.n_max, "largest period searched")->capture_default_str();
  verify->add_option("--laps", vo.laps, "iterates for lap counts")->capture_default_str();
  verify->add_option("--p", vo.p, "blocks of the negative example")->capture_default_str();
  verify->add_option("--L", vo.L, "Lipschitz constant of the negative example");
  verify->add_option("--example-k", vo.example_k, "also report the omega-star example bound for k");
  auto* iterate = app.add_subcommand("iterate", "orbit of a point under f = phi o psi");
  add_common(iterate, c);
  iterate->add_option("--start", start, "a, b or a vertex name")->capture_default_str();
  iterate->add_option("--param", param, "start at phi(t) instead");
  iterate->add_option("--steps", steps, "orbit length")->capture_default_str();
  auto* plot = app.add_subcommand("plot", "SVG of a graph level or an interval map");
  add_common(plot, c);
  plot->add_option("--what", what, "graph, factor or lambda")->capture_default_str();
  plot->add_option("--level", level, "graph level (default: top)");
  plot->add_option("--file", file, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*build) return cmd_build(c);
    if (*maps) return cmd_maps(c, between);
    if (*verify) return cmd_verify(c, vo);
    if (*iterate) return cmd_iterate(c, start, param, steps);
    if (*plot) return cmd_plot(c, what, level, file);
  } catch (const BlueprintError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << "; raise --depth\n";
    return kExitInconclusive;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInconclusive;
  }
  return kExitUsage;
}
