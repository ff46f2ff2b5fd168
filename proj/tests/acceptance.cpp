// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
// Usage: acceptance [report-dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <clspace/clspace.hpp>

using namespace clspace;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

using Files = std::map<std::string, std::string>;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) { return format_number(v); }

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

VerifyConfig verify_config() {
  VerifyConfig c;
  c.jobs = jobs();
  return c;
}

Outcome conjugate_closed_form() {
  Stopwatch sw;
  const auto F2 = YoungFunction::power(2);
  const auto F4 = YoungFunction::power(4);
  SolverConfig generic;
  generic.force_generic = true;
  const auto closed = conjugate(F2, F4);
  const auto solved = conjugate(F2, F4, generic);
  double dev_closed = 0.0;
  double dev_generic = 0.0;
  for (int k = -6; k <= 6; ++k) {
    const double t = std::ldexp(1.0, k);
    const double want = std::pow(t, 4) / 4;
    dev_closed = std::max(dev_closed, std::abs(closed(t).to_double() - want) / want);
    dev_generic = std::max(dev_generic, std::abs(solved(t).to_double() - want) / want);
  }
  const double secs = sw.seconds();
  const bool pass = dev_closed <= 1e-9 && dev_generic <= 1e-4 && secs < 1.0;
  return {1, "conjugate closed form", pass,
          "closed " + fmt(dev_closed) + " <= 1e-9, generic " + fmt(dev_generic) + " <= 1e-4, " + fmt(secs) + " s < 1 s"};
}

Outcome truncated_conjugate() {
  const auto H = conjugate_truncated(YoungFunction::truncated_power(2, 3), YoungFunction::power(4), 1.0);
  const double a = H(0.5).to_double();
  const double b = H(2.0).to_double();
  const bool c = H(3.5).is_inf();
  const bool pass = std::abs(a - 0.015625) <= 1e-6 && std::abs(b - 1.75) <= 1e-6 && c;
  return {2, "truncated conjugate piecewise identity", pass,
          "H(0.5)=" + fmt(a) + ", H(2)=" + fmt(b) + ", H(3.5)=" + format_number(H(3.5))};
}

struct Fixture {
  std::string name;
  SpaceSpec base;
  MeasureModel model;
  YoungFunction F;
  std::function<double(double)> psi_base;  // fundamental function of the base at measure t
};

std::vector<Fixture> fixtures() {
  const auto u = MeasureModel::unit_interval(32);
  const auto h = MeasureModel::half_line(8, 32);
  const auto c = MeasureModel::counting(8);
  const std::vector<double> w = {1.0, 0.7, 0.55, 0.45, 0.4, 0.35, 0.3, 0.3};
  return {
      {"L1/F2", SpaceSpec::lp(1), u, YoungFunction::power(2), [](double t) { return t; }},
      {"L1/exp", SpaceSpec::lp(1), u, YoungFunction::exp_minus_one(), [](double t) { return t; }},
      {"L2/F_{3,2}", SpaceSpec::lp(2), h, YoungFunction::truncated_power(3, 2), [](double t) { return std::sqrt(t); }},
      {"Lorentz/pl", SpaceSpec::lorentz(w), c, YoungFunction::piecewise_linear({{0, 0}, {1, 0.5}, {2, 2}, {4, 8}}),
       [w](double t) {
         double s = 0.0;
         for (std::size_t i = 0; i < static_cast<std::size_t>(std::llround(t)); ++i) s += w[i];
         return s;
       }},
      {"L1capLinf/F4", SpaceSpec::l1_cap_linf(), h, YoungFunction::power(4), [](double t) { return std::max(t, 1.0); }},
      {"L1^(2)/exp", SpaceSpec::convexification(SpaceSpec::lp(1), 2), u, YoungFunction::exp_minus_one(),
       [](double t) { return std::sqrt(t); }},
  };
}

// μ with M_F(f/μ) = 1 by bisection on the modular alone; nullopt when the
// modular skips the value 1.
std::optional<double> modular_unit_scale(const Fixture& fx, const StepFunction& f) {
  double lo = 1e-6 * f.sup();
  double hi = 1e6 * f.sup();
  const auto m = [&](double mu) { return modular(fx.base, fx.F, f.scaled(1.0 / mu)).to_double(); };
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (m(mid) > 1.0 ? lo : hi) = mid;
  }
  if (std::abs(m(hi) - 1.0) > 1e-9) return std::nullopt;
  return hi;
}

Outcome norm_modular_relations() {
  Stopwatch sw;
  const auto fx = fixtures();
  int violations = 0;
  int checked_i = 0;
  std::string first;
  const auto violate = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  for (int i = 0; i < 1000; ++i) {
    const auto& x = fx[i % fx.size()];
    auto rng = Rng::derived(2024, static_cast<std::uint64_t>(i));
    std::vector<double> v(x.model.cells(), 0.0);
    const std::size_t usable = x.model.kind() == ModelKind::half_line ? v.size() / 2 : v.size();
    for (std::size_t k = 0; k < usable; ++k) v[k] = rng.uniform() < 0.25 ? 0.0 : std::pow(10.0, rng.uniform(-2, 1));
    v[rng.below(usable)] = std::pow(10.0, rng.uniform(-2, 1));
    const StepFunction f(x.model, v);
    const auto XF = SpaceSpec::cl(x.base, x.F);
    const std::string tag = x.name + " #" + std::to_string(i);

    if (const auto mu = modular_unit_scale(x, f)) {
      const auto g = f.scaled(1.0 / *mu);
      const double mg = modular(x.base, x.F, g).to_double();
      if (std::abs(mg - 1.0) <= 1e-9) {
        ++checked_i;
        const double ng = norm(XF, g).value.to_double();
        if (std::abs(ng - 1.0) > 1e-6) violate("(i) " + tag + ": norm " + fmt(ng));
      }
    }

    const double nf = norm(XF, f).value.to_double();
    for (int k = 0; k < 3; ++k) {
      const double c = std::pow(2.0, rng.uniform(-2.0, 2.0));
      const auto g = f.scaled(c / nf);
      const double ng = norm(XF, g).value.to_double();
      const double mg = modular(x.base, x.F, g).to_double();
      if ((ng <= 1.0) != (mg <= 1.0 + 1e-9)) violate("(ii) " + tag + ": norm " + fmt(ng) + ", modular " + fmt(mg));
      if (ng < 1.0 && mg > ng + 1e-9) violate("(iii) " + tag + ": norm " + fmt(ng) + ", modular " + fmt(mg));
    }
  }
  const double secs = sw.seconds();
  const bool pass = violations == 0 && secs < 30.0;
  std::string d = std::to_string(violations) + " violations over 1000 functions, 6 fixtures ((i) exercised " +
                  std::to_string(checked_i) + " times), " + fmt(secs) + " s < 30 s";
  if (!first.empty()) d += "; first: " + first;
  return {3, "norm-modular relations", pass, d};
}

Outcome fundamental_cross_check() {
  double worst = 0.0;
  int points = 0;
  for (const auto& x : fixtures()) {
    const auto XF = SpaceSpec::cl(x.base, x.F);
    const std::size_t n = x.model.cells();
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = x.model.total_measure() * static_cast<double>(k) / static_cast<double>(n);
      const auto fv = fundamental(XF, x.model, t);
      const ExtReal inv = right_inverse(x.F, ExtReal(1.0 / x.psi_base(t)));
      const double formula = 1.0 / inv.value();
      const double lux = luxemburg_norm(x.base, x.F, indicator(x.model, t).function).value.value();
      worst = std::max({worst, std::abs(formula - lux) / formula, fv.relative_gap});
      ++points;
    }
  }
  return {4, "fundamental function cross-check", worst <= 1e-6,
          std::to_string(points) + " points, max relative gap " + fmt(worst) + " <= 1e-6"};
}

Outcome multiplier_power_identity(Files& files) {
  Stopwatch sw;
  double worst = 0.0;
  CsvWriter csv({"n", "probe", "method", "mult_lower", "l4_norm", "rel_dev"});
  for (std::size_t n : {2, 4, 6}) {
    const auto model = MeasureModel::counting(n);
    OptimizerConfig cfg;
    cfg.method = n <= 4 ? OptimizerMethod::grid_oracle : OptimizerMethod::coordinate_ascent;
    const auto devs = parallel_map<std::vector<std::string>>(50, jobs(), [&](std::size_t i) {
      auto rng = Rng::derived(5000 + n, i);
      std::vector<double> v(n);
      for (double& x : v) x = std::pow(10.0, rng.uniform(-1.0, 1.0));
      const StepFunction f(model, v);
      OptimizerConfig local = cfg;
      local.seed = 77 + i;
      const auto est = mult_norm(f, SpaceSpec::lp(4), SpaceSpec::lp(2), local);
      double l4 = 0.0;
      for (double x : v) l4 += std::pow(x, 4);
      l4 = std::pow(l4, 0.25);
      const double dev = std::abs(est.lower.value() - l4) / l4;
      return std::vector<std::string>{std::to_string(n), std::to_string(i), est.method, format_number(est.lower),
                                      fmt(l4), fmt(dev)};
    });
    for (const auto& row : devs) {
      worst = std::max(worst, std::stod(row[5]));
      csv.row(row);
    }
  }
  files["multiplier_power_identity.csv"] = csv.str();
  const double secs = sw.seconds();
  return {5, "multiplier power identity", worst <= 1e-3 && secs < 120.0,
          "150 probes on counting(2,4,6), max relative deviation " + fmt(worst) + " <= 1e-3, " + fmt(secs) +
              " s < 120 s"};
}

Outcome product_fundamental(Files& files) {
  const auto u = MeasureModel::unit_interval(64);
  double worst = 0.0;
  CsvWriter csv({"t", "product", "psi_squared"});
  for (int k = 1; k <= 8; ++k) {
    const double t = k / 8.0;
    const auto est = product_quasinorm(indicator(u, t).function, SpaceSpec::lp(2), SpaceSpec::lp(2));
    worst = std::max(worst, std::abs(est.upper.value() - t) / t);
    csv.row({fmt(t), format_number(est.upper), fmt(t)});
  }
  files["product_fundamental.csv"] = csv.str();
  return {6, "product fundamental function", worst <= 0.02,
          "8 indicators on unit_interval(64), max relative deviation " + fmt(worst) + " <= 0.02"};
}

Outcome lozanovskii(Files& files) {
  const auto m = MeasureModel::counting(4);
  const std::pair<std::string, SpaceSpec> spaces[2] = {{"L2", SpaceSpec::lp(2)},
                                                       {"Lorentz", SpaceSpec::lorentz({1.0, 0.6, 0.5, 0.2})}};
  double worst = 0.0;
  CsvWriter csv({"space", "probe", "l1_norm", "achieved", "ratio"});
  for (const auto& [name, X] : spaces) {
    const auto rows = parallel_map<LozanovskiiReport>(20, jobs(), [&](std::size_t i) {
      auto rng = Rng::derived(7000, i);
      std::vector<double> v(4);
      for (double& x : v) x = std::pow(10.0, rng.uniform(-1.0, 1.0));
      OptimizerConfig cfg;
      cfg.seed = 300 + i;
      return lozanovskii_check(X, StepFunction(m, v), 0.05, cfg);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      worst = std::max(worst, rows[i].ratio);
      csv.row({name, std::to_string(i), fmt(rows[i].l1_norm), format_number(rows[i].achieved), fmt(rows[i].ratio)});
    }
  }
  files["lozanovskii.csv"] = csv.str();
  return {7, "Lozanovskii factorization", worst <= 1.05,
          "20 probes each for L2 and Lorentz on counting(4), max ratio " + fmt(worst) + " <= 1.05"};
}

Outcome multiplier_theorem(Files& files) {
  const auto cfg = verify_config();
  const Triple power{"power", SpaceSpec::lp(1), MeasureModel::unit_interval(64), YoungFunction::power(4),
                     YoungFunction::power(2)};
  const auto rep = verify_multiplier_theorem(power, make_probes(power.model, cfg.probes, cfg.seed), cfg);
  bool in_range = true;
  for (const auto& p : rep.probes) {
    if (!p.probe.is_zero() && !(p.ratio >= 0.25 && p.ratio <= 4.0)) in_range = false;
  }
  const Triple degenerate{"not_nice", SpaceSpec::l1_cap_linf(), MeasureModel::half_line(16, 64),
                          YoungFunction::power(2), YoungFunction::truncated_power(4, 1)};
  const auto deg = verify_multiplier_theorem(degenerate, make_probes(degenerate.model, cfg.probes, cfg.seed), cfg);
  const auto full = conjugate(degenerate.G, degenerate.F);
  bool off_zero_inf = full.is_degenerate();
  for (double t : {1e-9, 1e-3, 1.0, 1e3}) off_zero_inf = off_zero_inf && full(t).is_inf();
  const bool ind_ok = deg.necessity && deg.necessity->indicator_mult.is_finite() &&
                      deg.necessity->indicator_mult.value() > 0.0;
  files["multiplier_power.json"] = to_json(rep).dump(2);
  files["multiplier_power.csv"] = theorem_csv({rep});
  files["multiplier_not_nice.json"] = to_json(deg).dump(2);
  const bool pass = rep.branch == Branch::theorem_A && in_range && off_zero_inf && ind_ok;
  return {8, "multiplier theorem at desk scale", pass,
          "power triple " + to_string(rep.branch) + ", " + std::to_string(rep.probes.size()) + " ratios in [" +
              fmt(rep.ratio_min) + ", " + fmt(rep.ratio_max) + "] within [0.25, 4]; degenerate triple: G⊖F " +
              (off_zero_inf ? "identically inf off zero" : "NOT degenerate") + ", unit indicator multiplier norm " +
              (deg.necessity ? format_number(deg.necessity->indicator_mult) : std::string("missing"))};
}

Outcome sequence_branch(Files& files) {
  ExamplesConfig cfg;
  cfg.verify = verify_config();
  const auto model = MeasureModel::counting(6);
  const auto cls = classify(SpaceSpec::l1_cap_linf(), model, YoungFunction::truncated_power(4, 1), YoungFunction::power(2));
  const auto branch = select_branch(cls);
  const auto orient = jump_orientations(SpaceSpec::l1_cap_linf(), model, 4.0, 2.0, cfg, 0.25, 4.0);
  Json j = Json::array();
  std::string d = "counting(6) routes to " + to_string(branch) + "; ";
  bool in_range = false;
  for (const auto& o : orient) {
    j.push_back(Json{{"orientation", o.label},
                     {"branch", o.branch},
                     {"conjugate", o.conjugate},
                     {"vs_target_lo", number(o.vs_target.lo)},
                     {"vs_target_hi", number(o.vs_target.hi)},
                     {"vs_conjugate_lo", number(o.vs_conjugate.lo)},
                     {"vs_conjugate_hi", number(o.vs_conjugate.hi)},
                     {"matches", o.matches}});
    d += o.label + " ratios " + detail::range_text(o.vs_target) + (o.matches ? " in range; " : " out of range; ");
  }
  d.resize(d.size() - 2);
  if (!orient.empty()) in_range = orient.front().vs_target.lo >= 0.25 && orient.front().vs_target.hi <= 4.0;
  files["sequence_branch.json"] = j.dump(2);
  return {9, "sequence-space branch", branch == Branch::theorem_not_nice && in_range && orient.size() == 2, d};
}

Outcome factorization(Files& files) {
  const auto cfg = verify_config();
  const Triple power{"power", SpaceSpec::lp(1), MeasureModel::unit_interval(64), YoungFunction::power(4),
                     YoungFunction::power(2)};
  const auto rep = verify_factorization(power, make_probes(power.model, cfg.probes, cfg.seed), cfg);
  const Triple mismatched{"mismatched", SpaceSpec::lp(1), MeasureModel::half_line(64, 64), YoungFunction::power(4),
                          YoungFunction::power(2)};
  const auto bad = verify_factorization(mismatched, make_probes(mismatched.model, cfg.probes, cfg.seed), cfg,
                                        YoungFunction::power(1));
  files["factorization_power.json"] = to_json(rep).dump(2);
  files["factorization_power.csv"] = factorization_csv({rep});
  files["factorization_mismatched.json"] = to_json(bad).dump(2);
  const bool power_ok = rep.analytic.relation == Relation::equivalent && rep.analytic.constant <= 4.0 &&
                        rep.split_max <= 2.0;
  const bool bad_ok = bad.analytic.relation == Relation::falsified && bad.analytic.witness.has_value() &&
                      bad.witness_reproduced && bad.verdict == Verdict::falsified;
  std::string d = "power triple: " + rep.case_label + ", constant " + fmt(rep.analytic.constant) +
                  " <= 4, split max " + fmt(rep.split_max) + " <= 2; counterexample: " + describe(bad.analytic);
  if (bad.analytic.witness) d += ", reproduced " + std::string(bad.witness_reproduced ? "yes" : "no");
  return {10, "factorization theorem", power_ok && bad_ok, d};
}

std::vector<Outcome> run_suite(Files& files) {
  std::vector<Outcome> out;
  out.push_back(conjugate_closed_form());
  out.push_back(truncated_conjugate());
  out.push_back(norm_modular_relations());
  out.push_back(fundamental_cross_check());
  out.push_back(multiplier_power_identity(files));
  out.push_back(product_fundamental(files));
  out.push_back(lozanovskii(files));
  out.push_back(multiplier_theorem(files));
  out.push_back(sequence_branch(files));
  out.push_back(factorization(files));
  Json summary = Json::array();
  for (const auto& o : out) summary.push_back(Json{{"criterion", o.id}, {"pass", o.pass}});
  files["summary.json"] = summary.dump(2);
  return out;
}

void write_all(const fs::path& dir, const Files& files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files) write_file((dir / name).string(), content);
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void print(const Outcome& o) {
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", o.id, o.title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance-reports");
  bool all = true;
  try {
    Files first;
    for (const auto& o : run_suite(first)) {
      print(o);
      all = all && o.pass;
    }
    write_all(root / "run1", first);
    Files second;
    run_suite(second);
    write_all(root / "run2", second);

    std::vector<std::string> differing;
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(root / "run1")) {
      const auto name = entry.path().filename();
      ++compared;
      if (!fs::exists(root / "run2" / name) || read_all(entry.path()) != read_all(root / "run2" / name)) {
        differing.push_back(name.string());
      }
    }
    for (const auto& entry : fs::directory_iterator(root / "run2")) {
      if (!fs::exists(root / "run1" / entry.path().filename())) differing.push_back(entry.path().filename().string());
    }
    std::string d = std::to_string(compared) + " report files compared in " + root.string();
    if (!differing.empty()) {
      d += "; differing:";
      for (const auto& n : differing) d += " " + n;
    } else {
      d += ", all byte-identical";
    }
    const Outcome det{11, "determinism", differing.empty() && compared > 0, d};
    print(det);
    all = all && det.pass;
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  return all ? 0 : 1;
}
