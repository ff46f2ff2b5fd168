#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asymptotics.hpp"
#include "measure.hpp"
#include "multprod.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "spaces.hpp"
#include "young.hpp"

namespace clspace {

struct TripleClassification {
  bool cond_psi = false;        // ψ_X does not vanish at zero
  bool cond_F_finite = false;   // b_F = ∞
  bool cond_G_jumps = false;    // b_G < ∞
  bool nice = true;
  bool sequence_space = false;
  double psi_smallest_cell = 0.0;  // ψ_X at one cell, for reference
};

inline TripleClassification classify(const SpaceSpec& X, const MeasureModel& model, const YoungFunction& F,
                                     const YoungFunction& G) {
  check_compatible(X, model);
  TripleClassification c;
  c.cond_psi = psi_bounded_below(X, model);
  c.cond_F_finite = F.is_finite_function();
  c.cond_G_jumps = G.jumps();
  c.nice = !(c.cond_psi && c.cond_F_finite && c.cond_G_jumps);
  c.sequence_space = model.is_sequence_space();
  c.psi_smallest_cell = fundamental(X, model, model.cell_measure()).value.to_double();
  return c;
}

enum class Branch { theorem_A, theorem_not_nice };

inline std::string to_string(Branch b) { return b == Branch::theorem_A ? "theorem_A" : "theorem_not_nice"; }

inline Branch select_branch(const TripleClassification& c) {
  return (c.nice && !c.sequence_space) ? Branch::theorem_A : Branch::theorem_not_nice;
}

struct BranchConjugate {
  YoungFunction H;
  std::string note;
};

// G ⊖ F for the first branch, G ⊖_1 F for the second. When b_F <= 1 the
// truncation at 1 is not admissible and the limit a → b_F, which is G ⊖ F,
// is used instead.
inline BranchConjugate branch_conjugate(const YoungFunction& F, const YoungFunction& G, Branch branch,
                                        const SolverConfig& cfg = {}) {
  if (branch == Branch::theorem_A) return {conjugate(G, F, cfg), {}};
  if (F.jump_raw() > 1.0) return {conjugate_truncated(G, F, 1.0, cfg), {}};
  return {conjugate(G, F, cfg), "b_F <= 1: truncation at 1 replaced by its limit G ⊖ F"};
}

struct Triple {
  std::string id;
  SpaceSpec base;
  MeasureModel model;
  YoungFunction F;
  YoungFunction G;

  SpaceSpec space_F() const { return SpaceSpec::cl(base, F); }
  SpaceSpec space_G() const { return SpaceSpec::cl(base, G); }
  std::string describe() const {
    return "(" + base.describe() + " on " + model.describe() + ", F=" + F.describe() + ", G=" + G.describe() + ")";
  }
};

enum class Verdict { consistent, falsified, undetermined, skipped };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::falsified:
      return "falsified";
    case Verdict::undetermined:
      return "undetermined";
    case Verdict::skipped:
      return "skipped";
  }
  return {};
}

inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::falsified || b == Verdict::falsified) return Verdict::falsified;
  if (a == Verdict::undetermined || b == Verdict::undetermined) return Verdict::undetermined;
  if (a == Verdict::skipped) return b;
  return a;
}

struct VerifyConfig {
  OptimizerConfig opt;
  double c_max = 8.0;
  double split_c = 2.0;
  int probes = 24;
  std::uint64_t seed = 1;
  int jobs = 1;
  ProbeGrid grid;
};

// Probe family: indicators at dyadic scales, extreme two-valued functions and
// seeded random simple functions with amplitudes over four decades. On the
// half-line probes vanish beyond T/2.
inline std::vector<StepFunction> make_probes(const MeasureModel& model, int count, std::uint64_t seed) {
  const std::size_t n = model.cells();
  const std::size_t usable = model.kind() == ModelKind::half_line ? std::max<std::size_t>(1, n / 2) : n;
  std::vector<StepFunction> out;
  const auto push = [&](std::vector<double> v) {
    if (static_cast<int>(out.size()) < count) out.emplace_back(model, std::move(v));
  };
  for (std::size_t k = 1;; k *= 2) {
    const std::size_t top = std::min(k, usable);
    std::vector<double> v(n, 0.0);
    std::fill_n(v.begin(), top, 1.0);
    push(std::move(v));
    if (top == usable) break;
  }
  const auto two_valued = [&](std::size_t k, double hi, double lo) {
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < usable; ++i) v[i] = i < k ? hi : lo;
    push(std::move(v));
  };
  if (usable > 1) {
    two_valued(1, 100.0, 1.0);
    two_valued(std::max<std::size_t>(1, usable / 2), 1.0, 1e-3);
    two_valued(std::max<std::size_t>(1, usable / 4), 1e3, 1e-3);
  }
  for (std::uint64_t r = 0; static_cast<int>(out.size()) < count; ++r) {
    Rng rng = Rng::derived(seed, r);
    const double amplitude = std::pow(10.0, rng.uniform(-2.0, 2.0));
    std::vector<double> v(n, 0.0);
    bool nonzero = false;
    for (std::size_t i = 0; i < usable; ++i) {
      if (rng.uniform() < 0.7) {
        v[i] = amplitude * std::exp(rng.uniform(-3.0, 3.0));
        nonzero = true;
      }
    }
    if (!nonzero) v[rng.below(usable)] = amplitude;
    push(std::move(v));
  }
  return out;
}

namespace detail {

// num/den with 0/0 = 1 and ∞/∞ = 1.
inline double ratio_of(const ExtReal& num, const ExtReal& den) {
  if (num.is_zero() && den.is_zero()) return 1.0;
  if (num.is_inf() && den.is_inf()) return 1.0;
  if (den.is_inf()) return 0.0;
  if (num.is_inf() || den.is_zero()) return kInf;
  return num.value() / den.value();
}

inline OptimizerConfig probe_optimizer(const OptimizerConfig& base, std::uint64_t seed, std::size_t id) {
  OptimizerConfig o = base;
  o.seed = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(id) + 1));
  return o;
}

inline Verdict ratio_verdict(double r, double c_max) {
  if (r > c_max) return Verdict::falsified;
  if (r < 1.0 / c_max) return Verdict::undetermined;
  return Verdict::consistent;
}

}  // namespace detail

struct ProbeOutcome {
  int id = 0;
  StepFunction probe;
  ExtReal mult_lower;
  StepFunction certificate;
  std::string method;
  ExtReal lux;
  double ratio = 0.0;
  Verdict verdict = Verdict::undetermined;
};

struct NecessityCheck {
  std::string conjugate;
  bool conjugate_degenerate = false;
  bool luxemburg_infinite = false;  // every nonzero probe has infinite norm in base_{G⊖F}
  ExtReal indicator_mult;           // multiplier norm of the unit indicator
  bool confirmed = false;
};

struct TheoremReport {
  std::string triple_id;
  std::string triple;
  TripleClassification cls;
  Branch branch = Branch::theorem_A;
  std::string branch_label;
  std::string conjugate;
  std::vector<std::string> notes;
  std::vector<ProbeOutcome> probes;
  double ratio_min = kInf;
  double ratio_max = 0.0;
  double constant = 0.0;  // max(ratio_max, 1/ratio_min)
  std::optional<NecessityCheck> necessity;
  Verdict verdict = Verdict::undetermined;
};

namespace detail {

inline ProbeOutcome multiplier_probe(const StepFunction& f, int id, const SpaceSpec& XF, const SpaceSpec& XG,
                                     const SpaceSpec& base, const YoungFunction& H, const VerifyConfig& cfg) {
  ProbeOutcome p{id, f, ExtReal(0.0), StepFunction::zero(f.model()), {}, ExtReal(0.0), 1.0, Verdict::consistent};
  auto opt = probe_optimizer(cfg.opt, cfg.seed, static_cast<std::size_t>(id));
  auto est = mult_norm(f, XF, XG, opt);
  p.lux = luxemburg_norm(base, H, f, opt.norm).value;
  const bool can_grid = f.size() <= kGridOracleMaxCells;
  const auto better = [&](OptimizerConfig o) {
    auto alt = mult_norm(f, XF, XG, o);
    if (alt.lower > est.lower) est = std::move(alt);
  };
  double r = ratio_of(est.lower, p.lux);
  if (r > cfg.c_max && can_grid && opt.method != OptimizerMethod::grid_oracle) {
    auto o = opt;
    o.method = OptimizerMethod::grid_oracle;
    better(o);
  } else if (r < 1.0 / cfg.c_max && p.lux.is_finite()) {
    auto o = opt;
    o.restarts *= 4;
    o.iterations *= 2;
    better(o);
    if (can_grid) {
      o.method = OptimizerMethod::grid_oracle;
      better(o);
    }
  }
  p.mult_lower = est.lower;
  p.certificate = est.certificate;
  p.method = est.method;
  p.ratio = ratio_of(p.mult_lower, p.lux);
  p.verdict = f.is_zero() ? Verdict::consistent : ratio_verdict(p.ratio, cfg.c_max);
  return p;
}

inline void summarize(TheoremReport& rep) {
  rep.ratio_min = kInf;
  rep.ratio_max = 0.0;
  Verdict v = Verdict::consistent;
  for (const auto& p : rep.probes) {
    if (p.probe.is_zero()) continue;
    rep.ratio_min = std::min(rep.ratio_min, p.ratio);
    rep.ratio_max = std::max(rep.ratio_max, p.ratio);
    v = combine(v, p.verdict);
  }
  rep.constant = rep.ratio_min > 0.0 ? std::max(rep.ratio_max, 1.0 / rep.ratio_min) : kInf;
  rep.verdict = v;
}

}  // namespace detail

// Multiplier theorem at desk scale: mult_norm(f; X_F, X_G) against the
// Luxemburg norm of the branch conjugate on every probe.
inline TheoremReport verify_multiplier_theorem(const Triple& t, const std::vector<StepFunction>& probes,
                                               const VerifyConfig& cfg = {}) {
  for (const auto& f : probes) {
    if (!(f.model() == t.model)) throw ModelMismatch("probe lives on " + f.model().describe() + ", triple on " + t.model.describe());
  }
  TheoremReport rep;
  rep.triple_id = t.id;
  rep.triple = t.describe();
  rep.cls = classify(t.base, t.model, t.F, t.G);
  rep.branch = select_branch(rep.cls);
  rep.branch_label = to_string(rep.branch);
  const auto& ycfg = cfg.opt.norm.young;
  auto bc = branch_conjugate(t.F, t.G, rep.branch, ycfg);
  rep.conjugate = bc.H.describe();
  if (!bc.note.empty()) rep.notes.push_back(bc.note);
  if (!is_convex_within_tolerance(bc.H)) rep.notes.push_back("conjugate table failed the convexity audit");

  const auto XF = t.space_F();
  const auto XG = t.space_G();
  rep.probes = parallel_map<ProbeOutcome>(probes.size(), cfg.jobs, [&](std::size_t i) {
    return detail::multiplier_probe(probes[i], static_cast<int>(i), XF, XG, t.base, bc.H, cfg);
  });
  detail::summarize(rep);

  if (bc.H.is_degenerate() && rep.branch == Branch::theorem_A) {
    rep.notes.push_back("G ⊖ F is degenerate: the multiplier space is trivial in the continuum and step functions cannot resolve it");
    rep.verdict = Verdict::undetermined;
  }

  if (!rep.cls.nice) {
    NecessityCheck nc;
    const auto full = conjugate(t.G, t.F, ycfg);
    nc.conjugate = full.describe();
    nc.conjugate_degenerate = full.is_degenerate();
    nc.luxemburg_infinite = true;
    for (const auto& f : probes) {
      if (!f.is_zero() && luxemburg_norm(t.base, full, f, cfg.opt.norm).value.is_finite()) nc.luxemburg_infinite = false;
    }
    const auto unit = indicator(t.model, std::min(1.0, t.model.total_measure())).function;
    nc.indicator_mult = mult_norm(unit, XF, XG, detail::probe_optimizer(cfg.opt, cfg.seed, probes.size())).lower;
    nc.confirmed = nc.conjugate_degenerate && nc.luxemburg_infinite && nc.indicator_mult.is_finite() &&
                   !nc.indicator_mult.is_zero();
    if (nc.confirmed) {
      rep.branch_label += " (degenerate confirmed)";
    } else {
      rep.verdict = combine(rep.verdict, Verdict::undetermined);
      rep.notes.push_back("necessity check not confirmed");
    }
    rep.necessity = nc;
  }
  return rep;
}

// Re-derives every probe verdict from the stored certificates without
// re-optimizing: feasibility of the certificate, its attained value, the
// Luxemburg norm and the ratio.
inline bool recheck_from_certificates(const TheoremReport& rep, const Triple& t, const VerifyConfig& cfg = {}) {
  const auto bc = branch_conjugate(t.F, t.G, rep.branch, cfg.opt.norm.young);
  const auto XF = t.space_F();
  const auto XG = t.space_G();
  for (const auto& p : rep.probes) {
    MultNormEstimate est{p.mult_lower, p.certificate, p.method, 0};
    if (!certificate_feasible(p.probe, XF, XG, est, cfg.opt.norm)) return false;
    const ExtReal lux = luxemburg_norm(t.base, bc.H, p.probe, cfg.opt.norm).value;
    if (lux.is_inf() != p.lux.is_inf()) return false;
    if (lux.is_finite() && std::abs(lux.value() - p.lux.value()) > 1e-9 * std::max(1.0, lux.value())) return false;
    const double r = detail::ratio_of(p.mult_lower, lux);
    const Verdict v = p.probe.is_zero() ? Verdict::consistent : detail::ratio_verdict(r, cfg.c_max);
    if (v != p.verdict) return false;
  }
  return true;
}

struct SplitOutcome {
  int id = 0;
  ExtReal target;        // ‖f‖_{X_G} before rescaling
  ExtReal product;       // ‖g‖_{X_F}·‖h‖_{X_H} for the rescaled f
  double split_ratio = 0.0;    // product / ‖f/target‖_{X_G}
  double reverse_ratio = 0.0;  // ‖gh‖_{X_G} / (‖g‖_{X_F}‖h‖_{X_H})
  StepFunction g;
  StepFunction h;
  Verdict verdict = Verdict::undetermined;
};

struct FactorizationReport {
  std::string triple_id;
  std::string triple;
  std::string case_label;
  Regime regime = Regime::all;
  Branch branch = Branch::theorem_A;
  std::string conjugate;
  bool analytic_checked = false;
  std::string condition;
  EquivalenceVerdict analytic;
  bool witness_reproduced = false;
  std::vector<std::pair<int, double>> escalating;
  std::vector<PlotRow> plot;
  std::vector<SplitOutcome> splits;
  double split_max = 0.0;
  double reverse_max = 0.0;
  std::optional<int> worst_probe;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::undetermined;
};

// Factorization X_F ⊙ M(X_F, X_G) = X_G: the asymptotic condition on the
// regime selected by the embeddings of X, then a split search per probe.
// `override_H` replaces the branch conjugate (used to build failing pairs).
inline FactorizationReport verify_factorization(const Triple& t, const std::vector<StepFunction>& probes,
                                                const VerifyConfig& cfg = {},
                                                const std::optional<YoungFunction>& override_H = std::nullopt) {
  FactorizationReport rep;
  rep.triple_id = t.id;
  rep.triple = t.describe();
  const auto cls = classify(t.base, t.model, t.F, t.G);
  rep.branch = select_branch(cls);
  const auto& ycfg = cfg.opt.norm.young;
  auto bc = branch_conjugate(t.F, t.G, rep.branch, ycfg);
  if (!bc.note.empty()) rep.notes.push_back(bc.note);
  const YoungFunction H = override_H ? *override_H : bc.H;
  if (override_H) rep.notes.push_back("conjugate replaced by " + H.describe());
  rep.conjugate = H.describe();

  const bool linf_in_x = linf_embeds_into(t.base, t.model);
  const bool x_in_linf = embeds_into_linf(t.base, t.model);
  if (is_linf(t.base) || (linf_in_x && x_in_linf && !t.model.is_sequence_space())) {
    rep.case_label = "X = Linf: factorization holds regardless of F and G";
  } else {
    rep.analytic_checked = true;
    if (rep.branch == Branch::theorem_not_nice) {
      rep.case_label = "case 4: small arguments, truncated conjugate";
      rep.regime = Regime::small;
    } else if (linf_in_x) {
      rep.case_label = "case 2: large arguments, Linf embeds into X";
      rep.regime = Regime::large;
    } else if (x_in_linf) {
      rep.case_label = "case 3: small arguments, X embeds into Linf";
      rep.regime = Regime::small;
    } else {
      rep.case_label = "case 1: all arguments, no embedding";
      rep.regime = Regime::all;
    }
    const auto lhs = inverse_of(t.F, "F^-1", ycfg) * inverse_of(H, "H^-1", ycfg);
    const auto rhs = inverse_of(t.G, "G^-1", ycfg);
    rep.condition = lhs.label + " ≈ " + rhs.label;
    rep.analytic = check_equivalence(lhs, rhs, rep.regime, cfg.grid);
    rep.plot = plot_rows(lhs, rhs, rep.regime, cfg.grid);
    if (rep.analytic.relation == Relation::falsified) {
      rep.witness_reproduced = reproduce_witness(rep.analytic, lhs, rhs);
      const auto& w = *rep.analytic.witness;
      const bool rhs_bigger = detail::required_constant(w.rhs, w.lhs) > detail::required_constant(w.lhs, w.rhs);
      rep.escalating = rhs_bigger ? escalating_sequence(rhs, lhs, rep.regime, cfg.grid)
                                  : escalating_sequence(lhs, rhs, rep.regime, cfg.grid);
    }
  }

  const auto XF = t.space_F();
  const auto XG = t.space_G();
  const auto XH = SpaceSpec::cl(t.base, H);
  rep.splits = parallel_map<SplitOutcome>(probes.size(), cfg.jobs, [&](std::size_t i) {
    const auto& f = probes[i];
    SplitOutcome s{static_cast<int>(i), ExtReal(0.0), ExtReal(0.0), 0.0, 0.0, StepFunction::zero(t.model),
                   StepFunction::zero(t.model), Verdict::skipped};
    s.target = norm(XG, f, cfg.opt.norm).value;
    if (s.target.is_zero() || s.target.is_inf()) return s;
    const auto fn = f.scaled(1.0 / s.target.value());
    const auto est = product_quasinorm(fn, XF, XH, detail::probe_optimizer(cfg.opt, cfg.seed, i));
    s.product = est.upper;
    s.g = est.g;
    s.h = est.h;
    const ExtReal fg = norm(XG, fn, cfg.opt.norm).value;
    s.split_ratio = detail::ratio_of(s.product, fg);
    s.reverse_ratio = detail::ratio_of(fg, s.product);
    if (s.split_ratio > cfg.c_max || s.reverse_ratio > cfg.c_max) {
      s.verdict = Verdict::falsified;
    } else if (s.split_ratio > cfg.split_c) {
      s.verdict = Verdict::undetermined;
    } else {
      s.verdict = Verdict::consistent;
    }
    return s;
  });

  Verdict v = Verdict::consistent;
  for (const auto& s : rep.splits) {
    if (s.verdict == Verdict::skipped) continue;
    if (!rep.worst_probe || s.split_ratio > rep.split_max) {
      rep.split_max = s.split_ratio;
      rep.worst_probe = s.id;
    }
    rep.reverse_max = std::max(rep.reverse_max, s.reverse_ratio);
    v = combine(v, s.verdict);
  }
  if (rep.analytic_checked) {
    if (rep.analytic.relation == Relation::falsified) {
      v = Verdict::falsified;
    } else if (!rep.analytic.determined()) {
      v = combine(v, Verdict::undetermined);
      rep.notes.push_back("asymptotic check has indeterminate probes");
    }
  }
  rep.verdict = v;
  return rep;
}

struct PerfectnessOutcome {
  int id = 0;
  ExtReal nested;  // mult_norm(f; X_H, X_G)
  ExtReal direct;  // ‖f‖_{X_F}
  double ratio = 0.0;
  Verdict verdict = Verdict::undetermined;
};

struct PerfectnessReport {
  std::string triple_id;
  std::string conjugate;
  std::vector<PerfectnessOutcome> probes;
  double ratio_min = kInf;
  double ratio_max = 0.0;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::undetermined;
};

// X_G-perfectness of X_F: the inner multiplier space is realized as X_H with H
// the branch conjugate, and M(X_H, X_G) is compared with X_F.
inline PerfectnessReport verify_perfectness(const Triple& t, const std::vector<StepFunction>& probes,
                                            const VerifyConfig& cfg = {}) {
  PerfectnessReport rep;
  rep.triple_id = t.id;
  const auto cls = classify(t.base, t.model, t.F, t.G);
  const auto branch = select_branch(cls);
  auto bc = branch_conjugate(t.F, t.G, branch, cfg.opt.norm.young);
  rep.conjugate = bc.H.describe();
  if (!bc.note.empty()) rep.notes.push_back(bc.note);
  if (bc.H.is_degenerate()) {
    rep.notes.push_back("skipped: the branch conjugate is degenerate");
    rep.verdict = Verdict::skipped;
    return rep;
  }
  const auto XH = SpaceSpec::cl(t.base, bc.H);
  const auto XF = t.space_F();
  const auto XG = t.space_G();
  rep.probes = parallel_map<PerfectnessOutcome>(probes.size(), cfg.jobs, [&](std::size_t i) {
    PerfectnessOutcome o;
    o.id = static_cast<int>(i);
    o.nested = mult_norm(probes[i], XH, XG, detail::probe_optimizer(cfg.opt, cfg.seed, i)).lower;
    o.direct = norm(XF, probes[i], cfg.opt.norm).value;
    o.ratio = detail::ratio_of(o.nested, o.direct);
    o.verdict = probes[i].is_zero() ? Verdict::consistent : detail::ratio_verdict(o.ratio, cfg.c_max);
    return o;
  });
  Verdict v = Verdict::consistent;
  for (const auto& o : rep.probes) {
    rep.ratio_min = std::min(rep.ratio_min, o.ratio);
    rep.ratio_max = std::max(rep.ratio_max, o.ratio);
    v = combine(v, o.verdict);
  }
  rep.verdict = v;
  return rep;
}

struct ExampleRow {
  std::string name;
  std::string identity;
  std::string measured;  // what `value` is
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
  std::string detail;
};

struct ExamplesConfig {
  VerifyConfig verify;
  int probes = 12;
};

namespace detail {

struct RatioRange {
  double lo = kInf;
  double hi = 0.0;
};

// Ratios mult_norm(f; XF, XG) / ‖f‖_target over the probes.
inline RatioRange multiplier_ratios(const std::vector<StepFunction>& probes, const SpaceSpec& XF,
                                    const SpaceSpec& XG, const SpaceSpec& target, const VerifyConfig& cfg,
                                    OptimizerMethod method) {
  std::vector<double> r(probes.size(), 1.0);
  parallel_for(probes.size(), cfg.jobs, [&](std::size_t i) {
    auto o = probe_optimizer(cfg.opt, cfg.seed, i);
    o.method = method;
    const auto m = mult_norm(probes[i], XF, XG, o).lower;
    r[i] = ratio_of(m, norm(target, probes[i], cfg.opt.norm).value);
  });
  RatioRange out;
  for (double x : r) {
    out.lo = std::min(out.lo, x);
    out.hi = std::max(out.hi, x);
  }
  return out;
}

inline std::string range_text(const RatioRange& r) {
  return "[" + format_number(r.lo) + ", " + format_number(r.hi) + "]";
}

}  // namespace detail

struct JumpOrientation {
  std::string label;
  std::string branch;
  std::string conjugate;
  detail::RatioRange vs_target;
  detail::RatioRange vs_conjugate;
  bool matches = false;
};

// Both role orientations of the multiplier identity for truncated powers:
// A takes F = F_{p,1}, G = F_q (as the identity is written), B swaps them.
inline std::vector<JumpOrientation> jump_orientations(const SpaceSpec& base, const MeasureModel& model, double p,
                                                      double q, const ExamplesConfig& cfg, double lo, double hi) {
  const double r = 1.0 / std::abs(1.0 / q - 1.0 / p);
  const auto target = SpaceSpec::cl(base, YoungFunction::truncated_power(r, 1.0));
  const auto probes = make_probes(model, cfg.probes, cfg.verify.seed);
  const auto method =
      model.cells() <= kGridOracleMaxCells ? OptimizerMethod::grid_oracle : OptimizerMethod::coordinate_ascent;
  std::vector<JumpOrientation> out;
  const std::pair<YoungFunction, YoungFunction> roles[2] = {
      {YoungFunction::truncated_power(p, 1.0), YoungFunction::power(q)},
      {YoungFunction::power(q), YoungFunction::truncated_power(p, 1.0)}};
  const char* labels[2] = {"A: F=F_{p,1}, G=F_q", "B: F=F_q, G=F_{p,1}"};
  for (int k = 0; k < 2; ++k) {
    const auto& [F, G] = roles[k];
    JumpOrientation o;
    o.label = labels[k];
    const auto cls = classify(base, model, F, G);
    const auto branch = select_branch(cls);
    o.branch = to_string(branch);
    const auto bc = branch_conjugate(F, G, branch, cfg.verify.opt.norm.young);
    o.conjugate = bc.H.describe() + (bc.note.empty() ? "" : " [" + bc.note + "]");
    const auto XF = SpaceSpec::cl(base, F);
    const auto XG = SpaceSpec::cl(base, G);
    o.vs_target = detail::multiplier_ratios(probes, XF, XG, target, cfg.verify, method);
    o.vs_conjugate = detail::multiplier_ratios(probes, XF, XG, SpaceSpec::cl(base, bc.H), cfg.verify, method);
    o.matches = o.vs_target.lo >= lo && o.vs_target.hi <= hi;
    out.push_back(o);
  }
  return out;
}

// Worked examples run through the generic pipeline at p=2, q=4, b=1.
inline std::vector<ExampleRow> reproduce_examples(const ExamplesConfig& cfg = {}) {
  std::vector<ExampleRow> rows;
  const auto F2 = YoungFunction::power(2.0);
  const auto F4 = YoungFunction::power(4.0);
  std::vector<double> ts;
  for (int k = -6; k <= 6; ++k) ts.push_back(std::ldexp(1.0, k));

  const auto deviation = [&](const YoungFunction& H) {
    double worst = 0.0;
    for (double t : ts) {
      const double want = std::pow(t, 4.0) / 4.0;
      worst = std::max(worst, std::abs(H(t).to_double() - want) / want);
    }
    return worst;
  };
  {
    ExampleRow row{"conjugate_power_pair", "F_2 ⊖ F_4 = F_4", "max relative deviation (closed form)", 0, 0, 1e-9, false, {}};
    row.value = deviation(conjugate(F2, F4));
    row.pass = row.value <= row.hi;
    rows.push_back(row);
    SolverConfig gen = cfg.verify.opt.norm.young;
    gen.force_generic = true;
    ExampleRow g{"conjugate_power_pair_generic", "F_2 ⊖ F_4 = F_4", "max relative deviation (sup solver)", 0, 0, 1e-4, false, {}};
    g.value = deviation(conjugate(F2, F4, gen));
    g.pass = g.value <= g.hi;
    rows.push_back(g);
  }
  {
    const auto G = YoungFunction::truncated_power(2.0, 3.0);
    const auto H = conjugate_truncated(G, F4, 1.0, cfg.verify.opt.norm.young);
    const double a = H(0.5).to_double();
    const double b = H(2.0).to_double();
    const bool c = H(3.5).is_inf();
    ExampleRow row{"truncated_conjugate", "F_{2,3} ⊖_1 F_4 = F_4, t^2/2 - 1/4, inf", "max abs deviation", 0, 0, 1e-6, false, {}};
    row.value = std::max(std::abs(a - 0.015625), std::abs(b - 1.75));
    row.pass = row.value <= row.hi && c;
    row.detail = "t=0.5 -> " + format_number(a) + ", t=2 -> " + format_number(b) + ", t=3.5 -> " +
                 format_number(H(3.5));
    rows.push_back(row);
    const auto full = conjugate(YoungFunction::truncated_power(2.0, 1.0), F4, cfg.verify.opt.norm.young);
    ExampleRow d{"truncated_untruncated_conjugate", "F_{2,1} ⊖ F_4 = inf off zero", "degenerate", 0, 1, 1, false, {}};
    d.value = full.is_degenerate() ? 1.0 : 0.0;
    d.pass = full.is_degenerate();
    rows.push_back(d);
  }
  {
    const auto model = MeasureModel::counting(6);
    const auto probes = make_probes(model, cfg.probes, cfg.verify.seed);
    const std::pair<std::string, SpaceSpec> bases[2] = {
        {"L1", SpaceSpec::lp(1.0)}, {"Lorentz", SpaceSpec::lorentz({1.0, 0.7, 0.55, 0.45, 0.4, 0.35})}};
    for (const auto& [name, X] : bases) {
      const auto r = detail::multiplier_ratios(probes, SpaceSpec::convexification(X, 4.0),
                                               SpaceSpec::convexification(X, 2.0),
                                               SpaceSpec::convexification(X, 4.0), cfg.verify,
                                               OptimizerMethod::grid_oracle);
      ExampleRow row{"convexification_multipliers[" + name + "]", "M(X^(4), X^(2)) = X^(4) on counting(6)",
                     "ratio range", r.hi, 0.5, 2.0, false, {}};
      row.pass = r.lo >= row.lo && r.hi <= row.hi;
      row.detail = "ratios " + detail::range_text(r);
      rows.push_back(row);
    }
  }
  {
    const std::pair<std::string, MeasureModel> models[2] = {{"counting(6)", MeasureModel::counting(6)},
                                                             {"half_line(16,16)", MeasureModel::half_line(16.0, 16)}};
    for (const auto& [name, model] : models) {
      const auto orient = jump_orientations(SpaceSpec::l1_cap_linf(), model, 4.0, 2.0, cfg, 0.25, 4.0);
      ExampleRow row{"jump_identity[" + name + "]", "M(L4 ∩ Linf, L2 ∩ Linf) = L4 ∩ Linf", "orientation A ratio max",
                     orient[0].vs_target.hi, 0.25, 4.0, false, {}};
      row.pass = orient[0].matches;
      for (const auto& o : orient) {
        row.detail += o.label + " (" + o.branch + ", H=" + o.conjugate + "): vs target " +
                      detail::range_text(o.vs_target) + ", vs H " + detail::range_text(o.vs_conjugate) +
                      (o.matches ? ", matches; " : ", does not match; ");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace clspace
