// fivevertex: command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fivevertex/io.hpp"
#include "fivevertex/limit_shape.hpp"
#include "fivevertex/mcmc.hpp"
#include "fivevertex/phase_diagram.hpp"
#include "fivevertex/thermodynamics.hpp"
#include "fivevertex/verify.hpp"

namespace fs = std::filesystem;
using namespace fivevertex;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  int grid = 0;
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
  int samples = 0;
  std::string example;
  std::optional<double> a;
  double window = 5;
  double burn_in = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FundamentalDomain load(const Options& o) {
  if (o.config.empty()) throw UsageError("--config is required");
  return load_domain(o.config);
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

void note(const std::string& path) { std::cout << "wrote " << path << '\n'; }

int cmd_surface_tension(const Options& o) {
  const auto d = load(o);
  const int n = o.grid > 0 ? o.grid : 40;
  SlopeInverter inv(d);
  const auto path = out_path(o, "surface_tension.csv");
  CsvWriter csv(path, d, {{"command", "surface-tension"}, {"grid", std::to_string(n)}},
                {"s", "t", "sigma", "region"});
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const double s = double(i) / n, t = double(j) / n;
      std::string region = "pure";
      if (on_triangle_boundary({s, t})) region = "edge";
      else if (in_coexistence(s, t, d)) region = "coexistence";
      csv.row(s, t, surface_tension({s, t}, d, &inv), region);
    }
  note(path);
  return 0;
}

int cmd_free_energy(const Options& o) {
  const auto d = load(o);
  const int n = o.grid > 0 ? o.grid : 40;
  FieldInverter inv(d);
  const auto path = out_path(o, "free_energy.csv");
  CsvWriter csv(path, d,
                {{"command", "free-energy"}, {"grid", std::to_string(n)}, {"window", fmt_num(o.window)}},
                {"X", "Y", "F", "phase", "s", "t"});
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double X = -o.window + 2 * o.window * i / n, Y = -o.window + 2 * o.window * j / n;
      const auto L = solve_legendre({X, Y}, d, inv);
      csv.row(X, Y, L.F, std::string(phase_name(L.phase)), L.slope.s, L.slope.t);
    }
  note(path);
  return 0;
}

int cmd_amoeba(const Options& o) {
  const auto d = load(o);
  const int n = o.samples > 0 ? o.samples : 2000;
  const auto pts = amoeba_boundary(d, o.epsilon, n);
  const auto path = out_path(o, "amoeba.csv");
  {
    CsvWriter csv(path, d,
                  {{"command", "amoeba"}, {"epsilon", fmt_num(o.epsilon)}, {"samples", std::to_string(n)}},
                  {"u_re", "u_im", "X", "Y", "branch_flag"});
    for (const auto& p : pts) csv.row(p.u.real(), p.u.imag(), p.X, p.Y, p.branch_flag);
  }
  note(path);
  Polyline line;
  for (const auto& p : pts) {
    if (p.branch_flag == 2) line.pts.push_back({NAN, NAN});
    else line.pts.push_back({p.X, p.Y});
  }
  const auto svg = out_path(o, "amoeba.svg");
  write_svg(svg, {line}, "amoeba boundary " + canonical_domain(d));
  note(svg);
  std::cout << "tentacles: " << tentacles(d).size() << '\n';
  return 0;
}

int cmd_coexistence(const Options& o) {
  const auto d = load(o);
  if (!d.small()) throw parameter_error("coexistence region exists only for small r");
  const int n = o.samples > 0 ? o.samples : 200;
  const auto path = out_path(o, "coexistence.csv");
  Polyline line;
  {
    CsvWriter csv(path, d, {{"command", "coexistence"}, {"samples", std::to_string(n)}}, {"R", "s", "t"});
    csv.row(0.0, 1.0, 0.0);
    line.pts.push_back({1, 0});
    for (int i = 1; i < n - 1; ++i) {
      const double R = std::exp(-12.0 + 24.0 * i / (n - 1));
      const auto p = coexistence_boundary(d, R);
      csv.row(R, p.s, p.t);
      line.pts.push_back({p.s, p.t});
    }
    csv.row(std::string("inf"), 0.0, 1.0);
    line.pts.push_back({0, 1});
  }
  note(path);
  Polyline tri{{{0, 0}, {1, 0}, {0, 1}, {0, 0}}, "gray"};
  const auto svg = out_path(o, "coexistence.svg");
  write_svg(svg, {tri, line}, "coexistence boundary " + canonical_domain(d));
  note(svg);
  return 0;
}

int cmd_limit_shape(const Options& o) {
  const auto d = load(o);
  if (o.example.empty()) throw UsageError("--example is required (semi_boxed_large_r or semi_boxed_small_r)");
  const auto G = builtin_G(builtin_from_name(o.example), d, o.a);
  MeshSpec spec;
  if (o.grid > 0) spec.n_radial = spec.n_angular = o.grid;
  const auto mesh = limit_shape_mesh(G, d, spec);
  std::map<std::string, std::string> params{{"command", "limit-shape"},
                                            {"example", o.example},
                                            {"grid", std::to_string(spec.n_radial)}};
  if (o.a) params["a"] = fmt_num(*o.a);
  const auto path = out_path(o, "limit_shape_mesh.csv");
  {
    CsvWriter csv(path, d, params, {"u_re", "u_im", "x", "y", "h", "s", "t", "flag"});
    for (const auto& m : mesh)
      csv.row(m.p.u.real(), m.p.u.imag(), m.p.x, m.p.y, m.p.h, m.p.s, m.p.t, m.flag);
  }
  note(path);
  const auto fb = frozen_boundary(G, d, o.samples > 0 ? o.samples : 2000);
  const auto fpath = out_path(o, "frozen_boundary.csv");
  Polyline line;
  {
    CsvWriter csv(fpath, d, params, {"u_re", "x", "y", "flag"});
    for (const auto& p : fb) {
      csv.row(p.u_re, p.x, p.y, p.flag);
      line.pts.push_back(p.flag == 0 ? std::pair{p.x, p.y} : std::pair{double(NAN), double(NAN)});
    }
  }
  note(fpath);
  const auto svg = out_path(o, "frozen_boundary.svg");
  write_svg(svg, {line}, o.example + " frozen boundary");
  note(svg);
  return 0;
}

int cmd_sample(const Options& o) {
  const auto d = load(o);
  const int n = o.grid > 0 ? o.grid : 16;
  const int chains = o.samples > 0 ? o.samples : 10;
  const std::string ex = o.example.empty() ? "semi_boxed" : o.example;
  Region R;
  if (ex == "semi_boxed") R = semi_boxed_region(n, 4 * n);
  else if (ex == "staircase") R = staircase_box(n, 4);
  else throw UsageError("unknown --example for sample: " + ex + " (semi_boxed or staircase)");
  std::size_t area = 0;
  for (char c : R.is_free) area += c;
  const auto moves = std::uint64_t(double(default_moves(area)) * o.burn_in);
  const auto samples = mcmc_chains(R, d, moves, o.seed, chains, int(std::thread::hardware_concurrency()));
  const auto P = empirical_height_profile(samples);
  const auto path = out_path(o, "sample.csv");
  {
    CsvWriter csv(path, d,
                  {{"command", "sample"},
                   {"example", ex},
                   {"n", std::to_string(n)},
                   {"chains", std::to_string(chains)},
                   {"moves", std::to_string(moves)},
                   {"seed", std::to_string(o.seed)}},
                  {"face_x", "face_y", "mean_h", "stderr"});
    for (int y = P.y0; y < P.y0 + P.height; ++y)
      for (int x = P.x0; x < P.x0 + P.width; ++x) csv.row(x, y, P.mean[P.idx(x, y)], P.stderr_[P.idx(x, y)]);
  }
  note(path);
  const auto snap = out_path(o, "snapshot.rle");
  std::ofstream(snap) << encode_snapshot(samples.front());
  note(snap);
  return 0;
}

int cmd_verify(const Options& o) {
  const auto d = load(o);
  const auto results = run_verification(d);
  nlohmann::json rep;
  rep["tool"] = "fivevertex";
  rep["version"] = kToolVersion;
  rep["config_hash"] = config_hash(d);
  rep["domain"] = canonical_domain(d);
  rep["regime"] = regime_name(d.regime);
  bool all = true;
  for (const auto& r : results) {
    nlohmann::json j;
    j["name"] = r.name;
    j["residual"] = std::isfinite(r.residual) ? nlohmann::json(r.residual) : nlohmann::json("inf");
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    rep["checks"].push_back(j);
    all = all && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " residual=" << fmt_num(r.residual)
              << " tol=" << fmt_num(r.tolerance) << '\n';
  }
  rep["pass"] = all;
  const auto path = out_path(o, "verify_report.json");
  std::ofstream(path) << rep.dump(2) << '\n';
  note(path);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fivevertex: five-vertex model thermodynamics, limit shapes and lattice checks"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "fundamental domain file (alphas, betas)");
    s->add_option("--out", o.out, "output directory");
    s->add_option("--grid", o.grid, "grid resolution");
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--epsilon", o.epsilon, "offset from the real axis (amoeba)");
    s->add_option("--samples", o.samples, "number of samples, points or chains");
    s->add_option("--example", o.example, "named example");
    s->add_option("--a", o.a, "parameter a of semi_boxed_small_r");
  };
  std::map<std::string, int (*)(const Options&)> cmds{
      {"surface-tension", cmd_surface_tension}, {"free-energy", cmd_free_energy},
      {"amoeba", cmd_amoeba},                   {"coexistence", cmd_coexistence},
      {"limit-shape", cmd_limit_shape},         {"sample", cmd_sample},
      {"verify", cmd_verify}};
  const std::map<std::string, std::string> help{
      {"surface-tension", "sigma(s,t) on a triangular slope grid"},
      {"free-energy", "F(X,Y) and the phase on a square field grid"},
      {"amoeba", "amoeba boundary traced along u = x + i epsilon"},
      {"coexistence", "boundary of the coexistence region (small r)"},
      {"limit-shape", "limit shape mesh and frozen boundary of a named example"},
      {"sample", "Metropolis chains on a region, mean heights and a snapshot"},
      {"verify", "invariant checks for one domain, written to verify_report.json"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : cmds) {
    auto* s = app.add_subcommand(name, help.at(name));
    add_common(s);
    subs[name] = s;
  }
  subs["free-energy"]->add_option("--window", o.window, "half-width of the (X,Y) window");
  subs["sample"]->add_option("--burn-in", o.burn_in, "multiplier on the default number of moves");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  for (const auto& [name, fn] : cmds) {
    if (!subs[name]->parsed()) continue;
    try {
      return fn(o);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    } catch (const parse_error& e) {
      std::cerr << "config error: " << o.config << ": " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
