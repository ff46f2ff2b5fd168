#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <clspace/clspace.hpp>

namespace fs = std::filesystem;
using namespace clspace;

namespace {

enum Exit { kConsistent = 0, kFalsified = 1, kConfig = 2, kNumerical = 3 };

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out = "clspace-out";
  std::string plot;
};

RunConfig load(const Globals& g) {
  RunConfig cfg = g.config.empty() ? parse_config("{}") : load_config(g.config);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.verify.seed = *g.seed;
    cfg.verify.opt.seed = *g.seed;
  }
  cfg.verify.jobs = std::max(1, g.jobs);
  return cfg;
}

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

int exit_for(Verdict v) { return v == Verdict::consistent || v == Verdict::skipped ? kConsistent : kFalsified; }

struct ConjugateArgs {
  std::string G, F;
  std::optional<double> a;
  std::vector<double> t;
  std::vector<double> grid;
};

int cmd_conjugate(const Globals& g, const ConjugateArgs& args) {
  const auto cfg = load(g);
  const auto& G = cfg.young_function(args.G);
  const auto& F = cfg.young_function(args.F);
  const auto& ycfg = cfg.verify.opt.norm.young;
  const auto H = args.a ? conjugate_truncated(G, F, *args.a, ycfg) : conjugate(G, F, ycfg);
  std::vector<double> ts = args.t;
  if (!args.grid.empty()) {
    if (args.grid.size() != 3 || !(args.grid[0] > 0) || !(args.grid[1] > args.grid[0]) || args.grid[2] < 2) {
      throw ConfigError("--grid expects LO HI N with 0 < LO < HI and N >= 2");
    }
    const auto pts = detail::geometric_grid(args.grid[0], args.grid[1], static_cast<int>(args.grid[2]));
    ts.insert(ts.end(), pts.begin(), pts.end());
  }
  if (ts.empty()) {
    for (int k = -6; k <= 6; ++k) ts.push_back(std::ldexp(1.0, k));
  }
  CsvWriter w({"t", "value"});
  for (double t : ts) w.row({format_number(t), format_number(H(t))});
  std::cout << w.str();
  if (!is_convex_within_tolerance(H)) std::cerr << "warning: conjugate table failed the convexity audit\n";
  write_file(out_path(g, "conjugate.csv"), w.str());
  return kConsistent;
}

struct NormArgs {
  std::string space, function, young;
};

int cmd_norm(const Globals& g, const NormArgs& args) {
  const auto cfg = load(g);
  const auto& X = cfg.space(args.space);
  const auto& f = cfg.function(args.function);
  const auto& ncfg = cfg.verify.opt.norm;
  NormValue v = args.young.empty() ? norm(X, f, ncfg) : luxemburg_norm(X, cfg.young_function(args.young), f, ncfg);
  std::cout << format_number(v.value) << "\n";
  Json cert{{"space", X.describe()},
            {"young", args.young.empty() ? Json(nullptr) : Json(cfg.young_function(args.young).describe())},
            {"function", to_json(f)},
            {"value", to_json(v.value)},
            {"method", v.method == NormMethod::closed_form ? "closed_form" : "bisection"},
            {"iterations", v.iterations}};
  write_file(out_path(g, "norm.json"), cert.dump(2) + "\n");
  return kConsistent;
}

struct PairArgs {
  std::string left, right, function, method;
};

OptimizerConfig pair_optimizer(const RunConfig& cfg, const std::string& method) {
  auto opt = cfg.verify.opt;
  if (method == "grid_oracle") opt.method = OptimizerMethod::grid_oracle;
  if (method == "coordinate_ascent") opt.method = OptimizerMethod::coordinate_ascent;
  return opt;
}

int cmd_mult_norm(const Globals& g, const PairArgs& args) {
  const auto cfg = load(g);
  const auto& X = cfg.space(args.left);
  const auto& Y = cfg.space(args.right);
  const auto& f = cfg.function(args.function);
  const auto est = mult_norm(f, X, Y, pair_optimizer(cfg, args.method));
  const bool ok = certificate_feasible(f, X, Y, est, cfg.verify.opt.norm);
  std::cout << format_number(est.lower) << "\n";
  Json cert{{"from", X.describe()}, {"to", Y.describe()}, {"function", to_json(f)}, {"estimate", to_json(est)},
            {"feasible", ok}};
  write_file(out_path(g, "mult_norm.json"), cert.dump(2) + "\n");
  if (!ok) {
    std::cerr << "certificate failed re-verification\n";
    return kNumerical;
  }
  return kConsistent;
}

int cmd_prod_norm(const Globals& g, const PairArgs& args) {
  const auto cfg = load(g);
  const auto& X = cfg.space(args.left);
  const auto& Y = cfg.space(args.right);
  const auto& f = cfg.function(args.function);
  const auto est = product_quasinorm(f, X, Y, pair_optimizer(cfg, args.method));
  std::cout << format_number(est.upper) << "\n";
  Json cert{{"left", X.describe()}, {"right", Y.describe()}, {"function", to_json(f)}, {"estimate", to_json(est)}};
  write_file(out_path(g, "prod_norm.json"), cert.dump(2) + "\n");
  if (!f.is_zero() && est.upper.is_inf()) {
    std::cerr << "no finite split found\n";
    return kNumerical;
  }
  return kConsistent;
}

int cmd_classify(const Globals& g, const std::vector<std::string>& names) {
  const auto cfg = load(g);
  Json all = Json::array();
  for (const auto& name : names) {
    const auto& t = cfg.triple(name).triple;
    const auto c = classify(t.base, t.model, t.F, t.G);
    std::cout << name << ": " << (c.nice ? "nice" : "not nice") << ", branch " << to_string(select_branch(c))
              << " (cond_psi=" << c.cond_psi << ", F finite=" << c.cond_F_finite << ", G jumps=" << c.cond_G_jumps
              << ")\n";
    Json j = to_json(c);
    j["triple_id"] = name;
    j["branch"] = to_string(select_branch(c));
    all.push_back(j);
  }
  write_file(out_path(g, "classify.json"), all.dump(2) + "\n");
  return kConsistent;
}

std::vector<std::string> all_triples(const RunConfig& cfg, const std::vector<std::string>& names) {
  if (!names.empty()) return names;
  std::vector<std::string> out;
  for (const auto& [k, v] : cfg.triples) out.push_back(k);
  if (out.empty()) throw ConfigError("no triples defined in the config");
  return out;
}

int cmd_examples(const Globals& g) {
  const auto cfg = load(g);
  ExamplesConfig ec;
  ec.verify = cfg.verify;
  const auto rows = reproduce_examples(ec);
  Json j = Json::array();
  bool pass = true;
  for (const auto& r : rows) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.measured << "=" << format_number(r.value)
              << "\n";
    j.push_back(to_json(r));
    pass = pass && r.pass;
  }
  write_file(out_path(g, "examples_report.json"), j.dump(2) + "\n");
  write_file(out_path(g, "examples_report.csv"), examples_csv(rows));
  return pass ? kConsistent : kFalsified;
}

int cmd_verify(const Globals& g, const std::string& mode, const std::vector<std::string>& names) {
  if (mode == "examples") return cmd_examples(g);
  const auto cfg = load(g);
  const auto triples = all_triples(cfg, names);
  Verdict overall = Verdict::consistent;
  Json all = Json::array();
  std::vector<PlotSeries> plot;
  if (mode == "multiplier") {
    std::vector<TheoremReport> reps;
    for (const auto& name : triples) {
      const auto& t = cfg.triple(name).triple;
      auto rep = verify_multiplier_theorem(t, make_probes(t.model, cfg.verify.probes, cfg.seed), cfg.verify);
      std::cout << name << ": " << rep.branch_label << ", ratios [" << format_number(rep.ratio_min) << ", "
                << format_number(rep.ratio_max) << "], " << to_string(rep.verdict) << "\n";
      PlotSeries s{name, {}};
      for (const auto& p : rep.probes) s.rows.push_back({static_cast<double>(p.id), p.mult_lower, p.lux});
      plot.push_back(std::move(s));
      overall = combine(overall, rep.verdict);
      all.push_back(to_json(rep));
      reps.push_back(std::move(rep));
    }
    write_file(out_path(g, "multiplier_report.csv"), theorem_csv(reps));
  } else if (mode == "factorization") {
    std::vector<FactorizationReport> reps;
    for (const auto& name : triples) {
      const auto& def = cfg.triple(name);
      const auto& t = def.triple;
      auto rep = verify_factorization(t, make_probes(t.model, cfg.verify.probes, cfg.seed), cfg.verify,
                                      def.conjugate_override);
      std::cout << name << ": " << rep.case_label;
      if (rep.analytic_checked) std::cout << "; " << rep.condition << " " << describe(rep.analytic);
      std::cout << "; split max " << format_number(rep.split_max) << ", " << to_string(rep.verdict) << "\n";
      if (rep.analytic.witness) {
        std::cout << "  witness t=" << format_number(rep.analytic.witness->t)
                  << " lhs=" << format_number(rep.analytic.witness->lhs)
                  << " rhs=" << format_number(rep.analytic.witness->rhs) << "\n";
      }
      plot.push_back({name, rep.plot});
      overall = combine(overall, rep.verdict);
      all.push_back(to_json(rep));
      reps.push_back(std::move(rep));
    }
    write_file(out_path(g, "factorization_report.csv"), factorization_csv(reps));
  } else if (mode == "perfectness") {
    std::vector<PerfectnessReport> reps;
    for (const auto& name : triples) {
      const auto& t = cfg.triple(name).triple;
      auto rep = verify_perfectness(t, make_probes(t.model, cfg.verify.probes, cfg.seed), cfg.verify);
      std::cout << name << ": ratios [" << format_number(rep.ratio_min) << ", " << format_number(rep.ratio_max)
                << "], " << to_string(rep.verdict) << "\n";
      PlotSeries s{name, {}};
      for (const auto& p : rep.probes) s.rows.push_back({static_cast<double>(p.id), p.nested, p.direct});
      plot.push_back(std::move(s));
      overall = combine(overall, rep.verdict);
      all.push_back(to_json(rep));
      reps.push_back(std::move(rep));
    }
    write_file(out_path(g, "perfectness_report.csv"), perfectness_csv(reps));
  } else {
    throw ConfigError("unknown verify mode '" + mode + "'");
  }
  write_file(out_path(g, mode + "_report.json"), all.dump(2) + "\n");
  if (!g.plot.empty()) write_file(g.plot, plot_csv(plot));
  return exit_for(overall);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calderón–Lozanovskiĭ spaces: conjugates, norms, multipliers, products and theorem checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--seed", g.seed, "override the configured seed");
  app.add_option("--jobs", g.jobs, "worker threads for per-probe verification")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "directory for reports and certificates");
  app.add_option("--emit-plot-data", g.plot, "CSV file for (t, lhs, rhs) plot data");

  ConjugateArgs conj;
  auto* c = app.add_subcommand("conjugate", "tabulate G ⊖ F or its truncation G ⊖_a F");
  c->add_option("--G", conj.G, "outer Young function")->required();
  c->add_option("--F", conj.F, "inner Young function")->required();
  c->add_option("--a", conj.a, "truncation bound, 0 < a < b_F");
  c->add_option("--t", conj.t, "evaluation points")->delimiter(',');
  c->add_option("--grid", conj.grid, "LO HI N: geometric grid")->expected(3);

  NormArgs na;
  auto* n = app.add_subcommand("norm", "norm in a space, or Luxemburg norm over a base with --young");
  n->add_option("--space", na.space, "space name")->required();
  n->add_option("--function", na.function, "function name")->required();
  n->add_option("--young", na.young, "Young function for the Luxemburg norm");

  PairArgs ma;
  auto* m = app.add_subcommand("mult-norm", "lower bound for the multiplier norm M(X,Y)");
  m->add_option("--from", ma.left, "domain space X")->required();
  m->add_option("--to", ma.right, "target space Y")->required();
  m->add_option("--function", ma.function, "function name")->required();
  m->add_option("--method", ma.method, "coordinate_ascent or grid_oracle")
      ->check(CLI::IsMember({"coordinate_ascent", "grid_oracle"}));

  PairArgs pa;
  auto* p = app.add_subcommand("prod-norm", "upper bound for the product quasi-norm of X ⊙ Y");
  p->add_option("--left", pa.left, "space X")->required();
  p->add_option("--right", pa.right, "space Y")->required();
  p->add_option("--function", pa.function, "function name")->required();
  p->add_option("--method", pa.method, "coordinate_ascent or grid_oracle")
      ->check(CLI::IsMember({"coordinate_ascent", "grid_oracle"}));

  std::vector<std::string> class_names;
  auto* cl = app.add_subcommand("classify", "classify triples (nice or not, theorem branch)");
  cl->add_option("--triple", class_names, "triple names (default: all)");

  std::string mode;
  std::vector<std::string> verify_names;
  auto* v = app.add_subcommand("verify", "verify a theorem on configured triples");
  v->add_option("--mode", mode, "multiplier, factorization, perfectness or examples")
      ->required()
      ->check(CLI::IsMember({"multiplier", "factorization", "perfectness", "examples"}));
  v->add_option("--triple", verify_names, "triple names (default: all)");

  auto* ex = app.add_subcommand("examples", "reproduce the worked examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfig;
  }

  try {
    if (c->parsed()) return cmd_conjugate(g, conj);
    if (n->parsed()) return cmd_norm(g, na);
    if (m->parsed()) return cmd_mult_norm(g, ma);
    if (p->parsed()) return cmd_prod_norm(g, pa);
    if (cl->parsed()) {
      const auto cfg = load(g);
      return cmd_classify(g, all_triples(cfg, class_names));
    }
    if (v->parsed()) return cmd_verify(g, mode, verify_names);
    if (ex->parsed()) return cmd_examples(g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ModelMismatch& e) {
    std::cerr << "model mismatch: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kConfig;
}
