#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ext_real.hpp"
#include "young.hpp"

namespace clspace {

enum class Regime { small, large, all };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::small:
      return "small";
    case Regime::large:
      return "large";
    case Regime::all:
      return "all";
  }
  return {};
}

// An evaluable composition of Young functions, inverses and products.
struct Composed {
  std::string label;
  std::function<ExtReal(double)> eval;

  ExtReal operator()(double t) const { return eval(t); }
};

inline Composed inverse_of(const YoungFunction& F, std::string label, const SolverConfig& cfg = {}) {
  return {std::move(label), [F, cfg](double s) { return right_inverse(F, ExtReal(s), cfg); }};
}

inline Composed function_of(const YoungFunction& F, std::string label) {
  return {std::move(label), [F](double t) { return F(t); }};
}

// Pointwise product; a 0·∞ probe raises DomainError and is reported as
// indeterminate by the checks below.
inline Composed operator*(const Composed& a, const Composed& b) {
  return {a.label + "·" + b.label, [a, b](double t) { return a(t) * b(t); }};
}

// Log-spaced probe points: small → [small_floor·T_small, T_small],
// large → [T_large, T_max], all → the union of both.
struct ProbeGrid {
  double t_small = 1.0;
  double t_large = 1.0;
  double t_max = 1e6;
  double small_floor = 1e-8;
  int probes = 256;

  std::vector<double> points(Regime regime) const {
    std::vector<double> out;
    if (regime != Regime::large) {
      const auto g = detail::geometric_grid(t_small * small_floor, t_small, probes);
      out.insert(out.end(), g.begin(), g.end());
    }
    if (regime != Regime::small) {
      const auto g = detail::geometric_grid(t_large, t_max, probes);
      out.insert(out.end(), g.begin(), g.end());
    }
    return out;
  }

  // Same endpoints with every gap halved; contains all current points.
  ProbeGrid refined() const {
    ProbeGrid r = *this;
    r.probes = 2 * probes - 1;
    return r;
  }
};

enum class Relation { dominates, equivalent, falsified };

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::dominates:
      return "dominates";
    case Relation::equivalent:
      return "equivalent";
    case Relation::falsified:
      return "falsified";
  }
  return {};
}

struct Witness {
  double t = 0.0;
  ExtReal lhs;
  ExtReal rhs;
  double ratio = 0.0;  // lhs / rhs, +inf when rhs = 0 < lhs or lhs = ∞ > rhs
};

inline constexpr int kLadderTop = 16;  // constants 1, 2, 4, ..., 2^16

// "dominates"/"equivalent" means consistent up to `constant` on the tested
// grid; "falsified" is a certified violation of every ladder constant at the
// witness.
struct EquivalenceVerdict {
  Relation relation = Relation::falsified;
  double constant = 0.0;
  std::optional<Witness> witness;
  int probes = 0;
  std::vector<double> indeterminate;  // probe points where a 0·∞ arose

  bool determined() const { return indeterminate.empty(); }
};

inline std::string describe(const EquivalenceVerdict& v) {
  std::string s;
  if (v.relation == Relation::falsified) {
    s = "falsified: no C <= " + format_number(std::ldexp(1.0, kLadderTop)) + " works";
    if (v.witness) s += " (witness t=" + format_number(v.witness->t) + ")";
  } else {
    s = "consistent up to C=" + format_number(v.constant) + " on the tested grid (not a proof)";
  }
  if (!v.indeterminate.empty()) s += "; " + std::to_string(v.indeterminate.size()) + " indeterminate probes";
  return s;
}

namespace detail {

// Smallest C with lhs <= C·rhs at this point (0 if none needed).
inline double required_constant(const ExtReal& lhs, const ExtReal& rhs) {
  if (lhs.is_zero()) return 0.0;
  if (lhs.is_inf()) return rhs.is_inf() ? 0.0 : kInf;
  if (rhs.is_inf()) return 0.0;
  if (rhs.is_zero()) return kInf;
  return lhs.value() / rhs.value();
}

}  // namespace detail

// lhs ≼ rhs on the regime's probe points, searching C over {1, 2, ..., 2^16}.
inline EquivalenceVerdict check_dominance(const Composed& lhs, const Composed& rhs, Regime regime,
                                          const ProbeGrid& grid = {}) {
  EquivalenceVerdict out;
  double worst = 0.0;
  for (double t : grid.points(regime)) {
    ++out.probes;
    ExtReal l, r;
    try {
      l = lhs(t);
      r = rhs(t);
    } catch (const DomainError&) {
      out.indeterminate.push_back(t);
      continue;
    }
    const double need = detail::required_constant(l, r);
    if (!out.witness || need > worst) {
      worst = need;
      out.witness = Witness{t, l, r, need};
    }
  }
  for (int k = 0; k <= kLadderTop; ++k) {
    const double c = std::ldexp(1.0, k);
    if (worst <= c * (1.0 + 1e-12)) {
      out.relation = Relation::dominates;
      out.constant = c;
      out.witness.reset();
      return out;
    }
  }
  out.relation = Relation::falsified;
  out.constant = std::ldexp(1.0, kLadderTop);
  return out;
}

// lhs ≈ rhs: both one-sided checks, constant is the larger one.
inline EquivalenceVerdict check_equivalence(const Composed& lhs, const Composed& rhs, Regime regime,
                                            const ProbeGrid& grid = {}) {
  const auto ab = check_dominance(lhs, rhs, regime, grid);
  const auto ba = check_dominance(rhs, lhs, regime, grid);
  EquivalenceVerdict out;
  out.probes = ab.probes;
  out.indeterminate = ab.indeterminate;
  out.constant = std::max(ab.constant, ba.constant);
  if (ab.relation == Relation::falsified) {
    out.relation = Relation::falsified;
    out.witness = ab.witness;
  } else if (ba.relation == Relation::falsified) {
    out.relation = Relation::falsified;
    // Report the witness in lhs/rhs orientation.
    const auto& w = *ba.witness;
    out.witness = Witness{w.t, w.rhs, w.lhs, detail::required_constant(w.rhs, w.lhs)};
  } else {
    out.relation = Relation::equivalent;
  }
  return out;
}

// Re-evaluates a falsified verdict at its witness: true iff the violation of
// the top ladder constant is reproduced (in either direction for ≈).
inline bool reproduce_witness(const EquivalenceVerdict& v, const Composed& lhs, const Composed& rhs) {
  if (v.relation != Relation::falsified || !v.witness) return false;
  const double top = std::ldexp(1.0, kLadderTop);
  const ExtReal l = lhs(v.witness->t);
  const ExtReal r = rhs(v.witness->t);
  return detail::required_constant(l, r) > top * (1.0 + 1e-12) || detail::required_constant(r, l) > top * (1.0 + 1e-12);
}

// Points a_n with big(a_n) >= 2^n · small(a_n), n = 1..max_n, chosen on the
// regime's probes and ordered toward the regime's limit (the escalating
// sequence behind a failed ≼). Stops at the first n without such a point.
inline std::vector<std::pair<int, double>> escalating_sequence(const Composed& big, const Composed& small,
                                                               Regime regime, const ProbeGrid& grid = {},
                                                               int max_n = 24) {
  auto pts = grid.points(regime);
  std::vector<std::pair<int, double>> out;
  std::vector<double> ratio(pts.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    try {
      ratio[i] = detail::required_constant(big(pts[i]), small(pts[i]));
    } catch (const DomainError&) {
      ratio[i] = 0.0;
    }
  }
  for (int n = 1; n <= max_n; ++n) {
    const double need = std::ldexp(1.0, n);
    std::optional<double> pick;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (ratio[i] < need) continue;
      // small regime: the largest qualifying point (sequence decreasing to 0);
      // otherwise the smallest one (sequence increasing).
      if (!pick || (regime == Regime::small ? pts[i] > *pick : pts[i] < *pick)) pick = pts[i];
    }
    if (!pick) break;
    out.emplace_back(n, *pick);
  }
  return out;
}

struct PlotRow {
  double t;
  ExtReal lhs;
  ExtReal rhs;
};

// (t, lhs, rhs) on the regime's probes; points raising 0·∞ are left out.
inline std::vector<PlotRow> plot_rows(const Composed& lhs, const Composed& rhs, Regime regime,
                                     const ProbeGrid& grid = {}) {
  std::vector<PlotRow> rows;
  for (double t : grid.points(regime)) {
    try {
      rows.push_back({t, lhs(t), rhs(t)});
    } catch (const DomainError&) {
    }
  }
  return rows;
}

}  // namespace clspace
