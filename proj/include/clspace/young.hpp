#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ext_real.hpp"

namespace clspace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Numerical knobs for inverses and conjugates.
struct SolverConfig {
  double rtol_inv = 1e-10;   // relative tolerance of right-inverse bisection
  double tol_sup = 1e-6;     // relative accuracy target of sup values
  double tol_cvx = 1e-6;     // relative chord tolerance for conjugate tables
  int sup_grid = 512;        // log-spaced s-grid points of the sup-solver
  double unbounded_lo = 1e-12;  // s-range when the inner function is finite
  double unbounded_hi = 1e12;
  int table_points = 256;    // t-grid stored with every conjugate table
  bool force_generic = false;  // skip closed-form fast paths
};

class YoungFunction;

namespace young_kind {

// t^p / p, p >= 1.
struct Power {
  double p;
};

// t^p / p on [0, b], ∞ beyond.
struct TruncatedPower {
  double p;
  double b;
};

// e^t - 1.
struct ExpMinusOne {};

// Linear interpolation between knots (0,0) = (t_0,v_0) < (t_1,v_1) < ...,
// continued with the last slope and cut off at `jump` (∞ beyond it).
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;
  double jump = kInf;
};

// Generalized conjugate of `outer` with respect to `inner`, evaluated on
// demand by the sup-solver. `bound` present means the truncated version with
// the closed range [0, bound]; absent means the open range [0, b_inner).
// `grid`/`values` hold the raw sup values used for the convexity audit.
struct ConjugateTable {
  std::shared_ptr<const YoungFunction> outer;
  std::shared_ptr<const YoungFunction> inner;
  std::optional<double> bound;
  SolverConfig cfg;
  std::vector<double> grid;
  std::vector<double> values;
  double convexity_defect = 0.0;
};

}  // namespace young_kind

using YoungKind = std::variant<young_kind::Power, young_kind::TruncatedPower, young_kind::ExpMinusOne,
                               young_kind::PiecewiseLinear, young_kind::ConjugateTable>;

struct SupResult {
  ExtReal value;
  double argmax = 0.0;
};

class YoungFunction {
 public:
  static YoungFunction power(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("power: exponent must satisfy 1 <= p < ∞");
    return YoungFunction(young_kind::Power{p}, kInf);
  }

  static YoungFunction truncated_power(double p, double b) {
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("truncated_power: exponent must satisfy 1 <= p < ∞");
    if (!(b > 0.0) || std::isinf(b)) throw DomainError("truncated_power: jump b must be positive and finite");
    return YoungFunction(young_kind::TruncatedPower{p, b}, b);
  }

  static YoungFunction exp_minus_one() { return YoungFunction(young_kind::ExpMinusOne{}, kInf); }

  // Knots must start at (0,0), increase strictly in t, and have nondecreasing
  // nonnegative slopes. A single knot is allowed only together with a finite
  // jump (the function is then 0 up to the jump).
  static YoungFunction piecewise_linear(std::vector<std::pair<double, double>> knots, double jump = kInf) {
    if (knots.empty() || knots.front().first != 0.0 || knots.front().second != 0.0) {
      throw DomainError("piecewise_linear: first knot must be (0, 0)");
    }
    if (!(jump >= 0.0)) throw DomainError("piecewise_linear: jump must be nonnegative");
    double prev_slope = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const auto [t0, v0] = knots[i - 1];
      const auto [t1, v1] = knots[i];
      if (!(t1 > t0) || !std::isfinite(t1) || !std::isfinite(v1)) {
        throw DomainError("piecewise_linear: knot abscissae must be finite and strictly increasing");
      }
      const double slope = (v1 - v0) / (t1 - t0);
      if (slope < prev_slope - 1e-12 * std::max(1.0, std::abs(prev_slope))) {
        throw DomainError("piecewise_linear: slopes must be nonnegative and nondecreasing (convexity)");
      }
      prev_slope = std::max(prev_slope, slope);
    }
    if (prev_slope == 0.0 && std::isinf(jump)) {
      throw DomainError("piecewise_linear: identically zero function is not a Young function");
    }
    return YoungFunction(young_kind::PiecewiseLinear{std::move(knots), jump}, jump);
  }

  // Identically ∞ off zero (jump point 0).
  static YoungFunction degenerate() { return piecewise_linear({{0.0, 0.0}}, 0.0); }

  const YoungKind& kind() const { return kind_; }

  template <typename K>
  const K* as() const {
    return std::get_if<K>(&kind_);
  }

  // b_F as a raw double (+inf when F is finite).
  double jump_raw() const { return b_; }
  ExtReal jump_point() const { return ExtReal(b_); }
  bool is_finite_function() const { return std::isinf(b_); }
  bool jumps() const { return !std::isinf(b_); }
  bool is_degenerate() const { return b_ == 0.0; }

  ExtReal operator()(double t) const {
    const double v = raw(t);
    return std::isinf(v) ? ExtReal::infinity() : ExtReal(v);
  }

  // Evaluation in doubles, +inf standing for ∞.
  double raw(double t) const;

  std::string describe() const;

 private:
  template <typename K>
  YoungFunction(K k, double b) : kind_(std::move(k)), b_(b) {}

  friend YoungFunction make_conjugate_table(const YoungFunction&, const YoungFunction&, std::optional<double>,
                                            const SolverConfig&);

  YoungKind kind_;
  double b_ = kInf;
};

inline ExtReal evaluate(const YoungFunction& F, double t) {
  if (!(t >= 0.0)) throw DomainError("evaluate: argument must be nonnegative");
  return F(t);
}

namespace detail {

inline double golden_max(const auto& f, double a, double b, double& best_x) {
  constexpr double kRatio = 0.6180339887498949;
  double c = b - kRatio * (b - a);
  double d = a + kRatio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(std::abs(b), 1e-300); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kRatio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kRatio * (b - a);
      fd = f(d);
    }
  }
  if (fc >= fd) {
    best_x = c;
    return fc;
  }
  best_x = d;
  return fd;
}

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / (n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(llo + step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace detail

// sup { G(st) − F(s) } over s ∈ [0, upper) (open) or [0, upper] (closed).
// upper = +inf means the inner function is finite; the search then runs over
// [unbounded_lo, unbounded_hi], and a maximizer stuck at the top of that range
// is read as divergence (value ∞).
inline SupResult sup_difference(const YoungFunction& G, const YoungFunction& F, double t, double upper, bool closed,
                                const SolverConfig& cfg) {
  if (!(t >= 0.0)) throw DomainError("conjugate: argument must be nonnegative");
  if (t == 0.0) return {ExtReal(0.0), 0.0};
  if (!(upper > 0.0)) return {ExtReal(0.0), 0.0};

  const double bG = G.jump_raw();
  if (std::isfinite(bG)) {
    const double sG = bG / t;
    if (sG < upper) return {ExtReal::infinity(), sG};
  }

  const bool bounded = std::isfinite(upper);
  const double top = bounded ? (closed ? upper : upper * (1.0 - 1e-12)) : cfg.unbounded_hi;
  const double lo = bounded ? upper * 1e-9 : cfg.unbounded_lo;

  const auto objective = [&](double s) {
    const double arg = std::isfinite(bG) ? std::min(s * t, bG) : s * t;
    const double gv = G.raw(arg);
    const double fv = F.raw(s);
    if (std::isinf(fv)) return -kInf;
    return gv - fv;
  };

  const auto grid = detail::geometric_grid(lo, top, std::max(cfg.sup_grid, 3));
  std::size_t k = 0;
  double best = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = objective(grid[i]);
    if (std::isinf(v) && v > 0) return {ExtReal::infinity(), grid[i]};
    if (v > best) {
      best = v;
      k = i;
    }
  }
  if (!bounded && k + 1 == grid.size()) return {ExtReal::infinity(), grid.back()};

  double arg_best = grid[k];
  double x = 0.0;
  const double left = k == 0 ? 0.0 : grid[k - 1];
  double v = detail::golden_max(objective, left, grid[k], x);
  if (v > best) {
    best = v;
    arg_best = x;
  }
  if (k + 1 < grid.size()) {
    v = detail::golden_max(objective, grid[k], grid[k + 1], x);
    if (v > best) {
      best = v;
      arg_best = x;
    }
  }
  if (!(best > 0.0)) return {ExtReal(0.0), 0.0};
  return {ExtReal(best), arg_best};
}

inline double YoungFunction::raw(double t) const {
  if (!(t >= 0.0)) throw DomainError("evaluate: argument must be nonnegative");
  if (t == 0.0) return 0.0;
  if (t > b_) return kInf;
  return std::visit(
      [t](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, young_kind::Power>) {
          return std::pow(t, k.p) / k.p;
        } else if constexpr (std::is_same_v<K, young_kind::TruncatedPower>) {
          return std::pow(t, k.p) / k.p;
        } else if constexpr (std::is_same_v<K, young_kind::ExpMinusOne>) {
          return std::expm1(t);
        } else if constexpr (std::is_same_v<K, young_kind::PiecewiseLinear>) {
          const auto& kn = k.knots;
          if (kn.size() == 1) return 0.0;
          for (std::size_t i = 1; i < kn.size(); ++i) {
            if (t <= kn[i].first) {
              const auto [t0, v0] = kn[i - 1];
              const auto [t1, v1] = kn[i];
              return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
          }
          const auto [ta, va] = kn[kn.size() - 2];
          const auto [tb, vb] = kn.back();
          return vb + (vb - va) / (tb - ta) * (t - tb);
        } else {
          const double upper = k.bound ? *k.bound : k.inner->jump_raw();
          return sup_difference(*k.outer, *k.inner, t, upper, k.bound.has_value(), k.cfg).value.to_double();
        }
      },
      kind_);
}

inline std::string YoungFunction::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, young_kind::Power>) {
          os << "power(p=" << format_number(k.p) << ")";
        } else if constexpr (std::is_same_v<K, young_kind::TruncatedPower>) {
          os << "truncated_power(p=" << format_number(k.p) << ",b=" << format_number(k.b) << ")";
        } else if constexpr (std::is_same_v<K, young_kind::ExpMinusOne>) {
          os << "exp_minus_one";
        } else if constexpr (std::is_same_v<K, young_kind::PiecewiseLinear>) {
          os << "piecewise_linear(knots=" << k.knots.size() << ",jump=" << format_number(k.jump) << ")";
        } else {
          os << "conjugate(" << k.outer->describe() << (k.bound ? " -" + format_number(*k.bound) + " " : " - ")
             << k.inner->describe() << ")";
        }
      },
      kind_);
  return os.str();
}

// Right-continuous inverse F⁻¹(s) = inf{t >= 0 : F(t) > s}, with
// F⁻¹(∞) = lim_{s→∞} F⁻¹(s) and inf ∅ = ∞.
inline ExtReal right_inverse(const YoungFunction& F, const ExtReal& s, const SolverConfig& cfg = {}) {
  const double b = F.jump_raw();
  if (s.is_inf()) return ExtReal(b);
  const double sv = s.value();

  if (const auto* k = F.as<young_kind::Power>()) return ExtReal(std::pow(k->p * sv, 1.0 / k->p));
  if (const auto* k = F.as<young_kind::TruncatedPower>()) {
    return ExtReal(std::min(std::pow(k->p * sv, 1.0 / k->p), k->b));
  }
  if (F.as<young_kind::ExpMinusOne>()) return ExtReal(std::log1p(sv));
  if (const auto* k = F.as<young_kind::PiecewiseLinear>()) {
    const auto& kn = k->knots;
    for (std::size_t i = 1; i < kn.size(); ++i) {
      const auto [t0, v0] = kn[i - 1];
      const auto [t1, v1] = kn[i];
      if (v1 > sv) return ExtReal(std::min(t0 + (sv - v0) * (t1 - t0) / (v1 - v0), b));
    }
    if (kn.size() >= 2) {
      const auto [ta, va] = kn[kn.size() - 2];
      const auto [tb, vb] = kn.back();
      const double slope = (vb - va) / (tb - ta);
      if (slope > 0.0) return ExtReal(std::min(tb + (sv - vb) / slope, b));
    }
    return ExtReal(b);
  }

  // Generic bisection on the predicate F(t) > s.
  double lo = 0.0;
  double hi = 0.0;
  if (std::isfinite(b)) {
    if (b == 0.0) return ExtReal(0.0);
    if (F.raw(b) <= sv) return ExtReal(b);
    hi = b;
  } else {
    hi = 1.0;
    int guard = 0;
    while (F.raw(hi) <= sv) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 2000) return ExtReal::infinity();
    }
  }
  for (int it = 0; it < 400 && (hi - lo) > cfg.rtol_inv * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F.raw(mid) > sv) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return ExtReal(hi);
}

inline YoungFunction make_conjugate_table(const YoungFunction& G, const YoungFunction& F, std::optional<double> bound,
                                          const SolverConfig& cfg) {
  young_kind::ConjugateTable tab;
  tab.outer = std::make_shared<const YoungFunction>(G);
  tab.inner = std::make_shared<const YoungFunction>(F);
  tab.bound = bound;
  tab.cfg = cfg;

  const double bG = G.jump_raw();
  const double upper = bound ? *bound : F.jump_raw();
  double jump = kInf;
  if (std::isfinite(bG)) {
    jump = std::isfinite(upper) ? bG / upper : 0.0;
  } else if (!std::isfinite(upper)) {
    // Both finite: the sup may still diverge past some threshold.
    const auto diverges = [&](double t) { return sup_difference(G, F, t, upper, false, cfg).value.is_inf(); };
    const auto scan = detail::geometric_grid(1e-8, 1e8, 161);
    std::size_t first = scan.size();
    for (std::size_t i = 0; i < scan.size(); ++i) {
      if (diverges(scan[i])) {
        first = i;
        break;
      }
    }
    if (first == 0) {
      jump = 0.0;
    } else if (first < scan.size()) {
      double lo = scan[first - 1];
      double hi = scan[first];
      for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diverges(mid) ? hi : lo) = mid;
      }
      jump = lo;
    }
  }

  if (jump > 0.0) {
    const double t_hi = std::isfinite(jump) ? jump : 1e3;
    tab.grid = detail::geometric_grid(t_hi * 1e-6, t_hi, std::max(cfg.table_points, 3));
    tab.values.reserve(tab.grid.size());
    for (double t : tab.grid) {
      tab.values.push_back(sup_difference(G, F, t, upper, bound.has_value(), cfg).value.to_double());
    }
    for (std::size_t i = 1; i + 1 < tab.grid.size(); ++i) {
      const double t1 = tab.grid[i - 1], t2 = tab.grid[i], t3 = tab.grid[i + 1];
      const double v1 = tab.values[i - 1], v2 = tab.values[i], v3 = tab.values[i + 1];
      if (!std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(v3)) continue;
      const double chord = v1 + (v3 - v1) * (t2 - t1) / (t3 - t1);
      const double scale = std::max(std::abs(v3), 1e-300);
      tab.convexity_defect = std::max(tab.convexity_defect, (v2 - chord) / scale);
    }
  }
  return YoungFunction(std::move(tab), jump);
}

// Whether a conjugate table passes the chord audit (other kinds are convex by
// construction).
inline bool is_convex_within_tolerance(const YoungFunction& H) {
  if (const auto* k = H.as<young_kind::ConjugateTable>()) return k->convexity_defect <= k->cfg.tol_cvx;
  return true;
}

// G ⊖ F: t ↦ sup_{0 <= s < b_F} {G(st) − F(s)}.
inline YoungFunction conjugate(const YoungFunction& G, const YoungFunction& F, const SolverConfig& cfg = {}) {
  if (!cfg.force_generic) {
    const auto* gp = G.as<young_kind::Power>();
    const auto* fp = F.as<young_kind::Power>();
    if (gp && fp) {
      if (gp->p < fp->p) return YoungFunction::power(1.0 / (1.0 / gp->p - 1.0 / fp->p));
      if (gp->p > fp->p) return YoungFunction::degenerate();
      // s^p (t^p − 1) / p: zero up to t = 1, unbounded beyond.
      return YoungFunction::piecewise_linear({{0.0, 0.0}}, 1.0);
    }
  }
  if (G.jumps() && F.is_finite_function()) return YoungFunction::degenerate();
  return make_conjugate_table(G, F, std::nullopt, cfg);
}

// G ⊖_a F: t ↦ sup_{0 <= s <= a} {G(st) − F(s)}, requires 0 < a < b_F.
inline YoungFunction conjugate_truncated(const YoungFunction& G, const YoungFunction& F, double a,
                                         const SolverConfig& cfg = {}) {
  if (!(a > 0.0) || !(a < F.jump_raw())) {
    throw DomainError("conjugate_truncated: bound must satisfy 0 < a < b_F");
  }
  return make_conjugate_table(G, F, a, cfg);
}

// F*(t) = sup_{s > 0} {st − F(s)}, i.e. conjugate with G(t) = t.
inline YoungFunction classical_conjugate(const YoungFunction& F, const SolverConfig& cfg = {}) {
  return conjugate(YoungFunction::power(1.0), F, cfg);
}

// Maximizer-carrying point evaluation of G ⊖ F (bound absent) or G ⊖_a F.
inline SupResult conjugate_at(const YoungFunction& G, const YoungFunction& F, std::optional<double> bound, double t,
                              const SolverConfig& cfg = {}) {
  if (bound && (!(*bound > 0.0) || !(*bound < F.jump_raw()))) {
    throw DomainError("conjugate_at: bound must satisfy 0 < a < b_F");
  }
  const double upper = bound ? *bound : F.jump_raw();
  return sup_difference(G, F, t, upper, bound.has_value(), cfg);
}

// (G ⊖_a F)(t) + F(s) − G(st); nonnegative up to the solver tolerance.
inline double young_inequality_residual(const YoungFunction& G, const YoungFunction& F, double a, double s, double t,
                                        const SolverConfig& cfg = {}) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("young_inequality_residual: s, t must be nonnegative");
  if (s > a) throw DomainError("young_inequality_residual: s must not exceed a");
  const ExtReal h = conjugate_at(G, F, a, t, cfg).value;
  if (h.is_inf()) return kInf;
  return h.value() + F.raw(s) - G.raw(s * t);
}

}  // namespace clspace
