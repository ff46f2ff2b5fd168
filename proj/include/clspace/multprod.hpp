#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ext_real.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "spaces.hpp"

namespace clspace {

enum class OptimizerMethod { coordinate_ascent, grid_oracle };

struct OptimizerConfig {
  int restarts = 6;
  int iterations = 200;  // sweeps per refined start
  std::uint64_t seed = 1;
  OptimizerMethod method = OptimizerMethod::coordinate_ascent;
  int resolution = 0;  // grid oracle simplex resolution, 0 picks one from the cell count
  bool sorted_ansatz = true;
  double min_step = 1e-7;
  int zoom_rounds = 24;
  NormConfig norm;
};

inline constexpr std::size_t kGridOracleMaxCells = 6;

struct MultNormEstimate {
  ExtReal lower;          // ‖f·certificate‖_Y, a lower bound for the multiplier norm
  StepFunction certificate;  // ‖certificate‖_X = 1 (zero when f = 0)
  std::string method;
  long evaluations = 0;
};

struct ProductEstimate {
  ExtReal upper;  // ‖g‖_X·‖h‖_Y for the stored split f = g·h
  StepFunction g;
  StepFunction h;
  std::string method;
  long evaluations = 0;
};

namespace detail {

inline std::vector<std::size_t> support_by_value(const StepFunction& f) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > 0.0) s.push_back(i);
  }
  std::stable_sort(s.begin(), s.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
  return s;
}

// Maximizes obj over x >= 0 on the `active` cells with multiplicative moves
// x_i·e^{±δ} (and x_i = 0 when allowed), halving δ after a sweep without
// progress. `project` maps each trial back onto the admissible set.
template <typename Obj, typename Project>
double coordinate_search(const Obj& obj, std::vector<double>& x, const std::vector<std::size_t>& active,
                         bool allow_zero, int sweeps, double min_step, const Project& project, long& evals) {
  project(x);
  double best = obj(x);
  ++evals;
  double delta = 1.0;
  std::vector<double> trial;
  for (int sweep = 0; sweep < sweeps && delta >= min_step; ++sweep) {
    bool improved = false;
    for (std::size_t i : active) {
      double top = 0.0;
      for (std::size_t j : active) top = std::max(top, x[j]);
      const double xi = x[i];
      double cands[3];
      int nc = 0;
      if (xi > 0.0) {
        cands[nc++] = xi * std::exp(delta);
        cands[nc++] = xi * std::exp(-delta);
        if (allow_zero) cands[nc++] = 0.0;
      } else {
        cands[nc++] = top * std::exp(-1.0 / delta);
        cands[nc++] = top * std::min(delta, 1.0);
      }
      for (int c = 0; c < nc; ++c) {
        trial = x;
        trial[i] = cands[c];
        project(trial);
        const double v = obj(trial);
        ++evals;
        if (v > best + 1e-14 * std::abs(best)) {
          best = v;
          x = trial;
          improved = true;
        }
      }
    }
    if (!improved) delta *= 0.5;
  }
  return best;
}

// All vectors k/R with nonnegative integers k summing to R (k_i >= 1 when
// `positive`), visited in lexicographic order.
template <typename Visit>
void for_each_simplex_point(std::size_t dim, int resolution, bool positive, const Visit& visit) {
  std::vector<int> k(dim, 0);
  const int floor = positive ? 1 : 0;
  std::vector<double> x(dim);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == dim) {
      if (left < floor) return;
      k[i] = left;
      for (std::size_t j = 0; j < dim; ++j) x[j] = static_cast<double>(k[j]) / resolution;
      visit(x);
      return;
    }
    const int reserve = floor * static_cast<int>(dim - i - 1);
    for (int v = floor; v <= left - reserve; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, resolution);
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Largest resolution whose simplex grid stays within `budget` points.
inline int auto_resolution(std::size_t dim, bool positive, double budget = 2e5) {
  if (dim <= 1) return 1;
  const int d = static_cast<int>(dim);
  int r = positive ? d : 1;
  while (r < 4096) {
    const int next = r + 1;
    const double count = positive ? binomial(next - 1, d - 1) : binomial(next + d - 1, d - 1);
    if (count > budget) break;
    r = next;
  }
  return r;
}

// Grid enumeration followed by shrinking local boxes around the incumbent.
template <typename Obj>
double grid_search(const Obj& obj, std::vector<double>& best_x, std::size_t dim, int resolution, bool positive,
                   int zoom_rounds, long& evals) {
  double best = -kInf;
  for_each_simplex_point(dim, resolution, positive, [&](const std::vector<double>& x) {
    const double v = obj(x);
    ++evals;
    if (v > best) {
      best = v;
      best_x = x;
    }
  });
  if (best_x.empty()) return best;
  double h = 1.0 / resolution;
  static constexpr double kOffsets[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<double> x(dim);
  std::vector<int> idx(dim);
  for (int round = 0; round < zoom_rounds; ++round) {
    const auto center = best_x;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      bool valid = true;
      bool nonzero = false;
      for (std::size_t j = 0; j < dim; ++j) {
        x[j] = center[j] + kOffsets[idx[j]] * h;
        if (x[j] < 0.0) x[j] = 0.0;
        if (positive && x[j] <= 0.0) valid = false;
        nonzero = nonzero || x[j] > 0.0;
      }
      if (valid && nonzero) {
        const double v = obj(x);
        ++evals;
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      std::size_t j = 0;
      while (j < dim && ++idx[j] == 5) idx[j++] = 0;
      if (j == dim) break;
    }
    h *= 0.5;
  }
  return best;
}

inline void require_grid_size(const StepFunction& f) {
  if (f.size() > kGridOracleMaxCells) {
    throw DomainError("grid_oracle accepts models with at most " + std::to_string(kGridOracleMaxCells) +
                      " cells, got " + std::to_string(f.size()));
  }
}

}  // namespace detail

// Lower bound for sup{‖fg‖_Y : ‖g‖_X = 1} with a certificate g.
inline MultNormEstimate mult_norm(const StepFunction& f, const SpaceSpec& X, const SpaceSpec& Y,
                                  const OptimizerConfig& cfg = {}, const std::vector<StepFunction>& extra_starts = {}) {
  check_compatible(X, f.model());
  check_compatible(Y, f.model());
  for (const auto& s : extra_starts) require_same_model(f, s);
  const auto& model = f.model();
  const std::size_t n = f.size();
  const auto support = detail::support_by_value(f);
  const bool grid = cfg.method == OptimizerMethod::grid_oracle;
  if (grid) detail::require_grid_size(f);

  MultNormEstimate out{ExtReal(0.0), StepFunction::zero(model), grid ? "grid_oracle" : "coordinate_ascent", 0};
  if (support.empty()) {
    const ExtReal unit = detail::raw_norm(X, std::vector<double>(n, 1.0), model, cfg.norm);
    if (unit.is_finite() && unit.value() > 0.0) out.certificate = StepFunction(model, std::vector<double>(n, 1.0 / unit.value()));
    return out;
  }

  // Infinite objective values are only produced when ‖fg‖_Y = ∞ < ‖g‖_X.
  bool unbounded = false;
  std::vector<double> unbounded_at;
  std::vector<double> prod(n);
  const auto objective = [&](const std::vector<double>& g) -> double {
    const ExtReal gx = detail::raw_norm(X, g, model, cfg.norm);
    if (gx.is_inf() || gx.is_zero()) return -kInf;
    for (std::size_t i = 0; i < n; ++i) prod[i] = f[i] * g[i];
    const ExtReal fy = detail::raw_norm(Y, prod, model, cfg.norm);
    if (fy.is_inf()) {
      if (!unbounded) unbounded_at = g;
      unbounded = true;
      return kInf;
    }
    return fy.value() / gx.value();
  };
  const auto project = [&](std::vector<double>& g) {
    if (!cfg.sorted_ansatz) return;
    std::vector<double> vals;
    vals.reserve(support.size());
    for (std::size_t i : support) vals.push_back(g[i]);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    for (std::size_t k = 0; k < support.size(); ++k) g[support[k]] = vals[k];
  };

  std::vector<double> best_g;
  double best = -kInf;
  if (grid) {
    const int res = cfg.resolution > 0 ? cfg.resolution : detail::auto_resolution(support.size(), false);
    std::vector<double> sub_best;
    std::vector<double> full(n, 0.0);
    const auto sub_objective = [&](const std::vector<double>& x) {
      for (std::size_t k = 0; k < support.size(); ++k) full[support[k]] = x[k];
      return objective(full);
    };
    best = detail::grid_search(sub_objective, sub_best, support.size(), res, false, cfg.zoom_rounds, out.evaluations);
    best_g.assign(n, 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) best_g[support[k]] = sub_best[k];
  } else {
    std::vector<std::vector<double>> starts;
    const auto restrict = [&](const std::vector<double>& g) {
      std::vector<double> r(n, 0.0);
      for (std::size_t i : support) r[i] = g[i];
      return r;
    };
    for (std::size_t k = 1;; k *= 2) {
      const std::size_t top = std::min(k, support.size());
      std::vector<double> g(n, 0.0);
      for (std::size_t j = 0; j < top; ++j) g[support[j]] = 1.0;
      starts.push_back(g);
      if (top == support.size()) break;
    }
    for (double alpha : {0.5, 1.0, 2.0, 3.0, -1.0}) {
      std::vector<double> g(n, 0.0);
      for (std::size_t i : support) g[i] = std::pow(f[i] / f[support.front()], alpha);
      starts.push_back(g);
    }
    for (const auto& s : extra_starts) {
      auto g = restrict(std::vector<double>(s.values().begin(), s.values().end()));
      if (std::any_of(g.begin(), g.end(), [](double v) { return v > 0.0; })) starts.push_back(g);
    }
    for (int r = 0; r < cfg.restarts; ++r) {
      Rng rng = Rng::derived(cfg.seed, static_cast<std::uint64_t>(r));
      std::vector<double> g(n, 0.0);
      for (std::size_t i : support) g[i] = std::exp(rng.uniform(-3.0, 3.0));
      starts.push_back(g);
    }
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      project(starts[s]);
      ranked.emplace_back(objective(starts[s]), s);
      ++out.evaluations;
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t refine = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(cfg.restarts, 1)));
    for (std::size_t r = 0; r < refine && !unbounded; ++r) {
      auto g = starts[ranked[r].second];
      const double v = detail::coordinate_search(objective, g, support, true, cfg.iterations, cfg.min_step, project,
                                                 out.evaluations);
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
  }

  if (unbounded) best_g = unbounded_at;
  if (best_g.empty() || !(best > -kInf)) return out;
  const double gx = detail::raw_norm(X, best_g, model, cfg.norm).value();
  for (double& v : best_g) v /= gx;
  for (std::size_t i = 0; i < n; ++i) prod[i] = f[i] * best_g[i];
  out.lower = detail::raw_norm(Y, prod, model, cfg.norm);
  out.certificate = StepFunction(model, std::move(best_g));
  return out;
}

// Re-evaluates a multiplier certificate from scratch.
inline bool certificate_feasible(const StepFunction& f, const SpaceSpec& X, const SpaceSpec& Y,
                                 const MultNormEstimate& est, const NormConfig& cfg = {}) {
  if (est.lower.is_zero()) return true;
  const ExtReal gx = norm(X, est.certificate, cfg).value;
  if (!(gx <= ExtReal(1.0 + 1e-9))) return false;
  const ExtReal fy = norm(Y, pointwise_product(f, est.certificate), cfg).value;
  if (est.lower.is_inf()) return fy.is_inf();
  return fy.to_double() >= est.lower.value() - 1e-9;
}

// ‖f‖_X·mult_norm(g) − ‖fg‖_Y, with f/‖f‖_X among the starts for g's
// multiplier search; nonnegative whenever the inequality is respected.
inline double holder_rogers_residual(const StepFunction& f, const StepFunction& g, const SpaceSpec& X,
                                     const SpaceSpec& Y, const OptimizerConfig& cfg = {}) {
  require_same_model(f, g);
  const ExtReal fx = norm(X, f, cfg.norm).value;
  if (fx.is_zero() || g.is_zero()) return 0.0;
  const auto est = mult_norm(g, X, Y, cfg, {f});
  const ExtReal fgy = norm(Y, pointwise_product(f, g), cfg.norm).value;
  const ExtReal bound = fx * est.lower;
  if (bound.is_inf()) return kInf;
  if (fgy.is_inf()) return -kInf;
  return bound.value() - fgy.value();
}

// Upper bound for inf{‖g‖_X·‖h‖_Y : f = g·h} with the split as certificate.
// g and h vanish off the support of f.
inline ProductEstimate product_quasinorm(const StepFunction& f, const SpaceSpec& X, const SpaceSpec& Y,
                                         const OptimizerConfig& cfg = {}) {
  check_compatible(X, f.model());
  check_compatible(Y, f.model());
  const auto& model = f.model();
  const std::size_t n = f.size();
  const auto support = detail::support_by_value(f);
  const bool grid = cfg.method == OptimizerMethod::grid_oracle;
  if (grid) detail::require_grid_size(f);

  ProductEstimate out{ExtReal(0.0), StepFunction::zero(model), StepFunction::zero(model),
                      grid ? "grid_oracle" : "coordinate_descent", 0};
  if (support.empty()) return out;

  std::vector<double> h(n);
  const auto split_cost = [&](const std::vector<double>& g) -> double {
    for (std::size_t i = 0; i < n; ++i) h[i] = g[i] > 0.0 ? f[i] / g[i] : 0.0;
    const ExtReal gx = detail::raw_norm(X, g, model, cfg.norm);
    const ExtReal hy = detail::raw_norm(Y, h, model, cfg.norm);
    if (gx.is_inf() || hy.is_inf()) return kInf;
    return gx.value() * hy.value();
  };
  const auto objective = [&](const std::vector<double>& g) { return -split_cost(g); };

  std::vector<double> best_g;
  double best = -kInf;
  if (grid) {
    const int res = cfg.resolution > 0 ? cfg.resolution : detail::auto_resolution(support.size(), true);
    std::vector<double> sub_best;
    std::vector<double> full(n, 0.0);
    const auto sub_objective = [&](const std::vector<double>& x) {
      for (std::size_t k = 0; k < support.size(); ++k) full[support[k]] = x[k];
      return objective(full);
    };
    best = detail::grid_search(sub_objective, sub_best, support.size(), res, true, cfg.zoom_rounds, out.evaluations);
    best_g.assign(n, 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) best_g[support[k]] = sub_best[k];
  } else {
    std::vector<std::vector<double>> starts;
    for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      std::vector<double> g(n, 0.0);
      for (std::size_t i : support) g[i] = std::pow(f[i], theta);
      starts.push_back(g);
    }
    for (int r = 0; r < cfg.restarts; ++r) {
      Rng rng = Rng::derived(cfg.seed, static_cast<std::uint64_t>(r));
      std::vector<double> g(n, 0.0);
      for (std::size_t i : support) {
        g[i] = (r % 2 == 0) ? std::pow(f[i], rng.uniform()) : std::exp(rng.uniform(-2.0, 2.0));
      }
      starts.push_back(g);
    }
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      ranked.emplace_back(objective(starts[s]), s);
      ++out.evaluations;
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t refine = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(cfg.restarts, 1)));
    const auto keep = [](std::vector<double>&) {};
    for (std::size_t r = 0; r < refine; ++r) {
      auto g = starts[ranked[r].second];
      const double v = detail::coordinate_search(objective, g, support, false, cfg.iterations, cfg.min_step, keep,
                                                 out.evaluations);
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
  }

  if (!(best > -kInf)) {
    out.upper = ExtReal::infinity();
    return out;
  }
  std::vector<double> hv(n, 0.0);
  for (std::size_t i : support) hv[i] = f[i] / best_g[i];
  const double gx = detail::raw_norm(X, best_g, model, cfg.norm).value();
  const double hy = detail::raw_norm(Y, hv, model, cfg.norm).value();
  // Balance the split so both factors carry the same norm.
  const double c = std::sqrt(hy / gx);
  for (double& v : best_g) v *= c;
  for (double& v : hv) v /= c;
  out.g = StepFunction(model, std::move(best_g));
  out.h = StepFunction(model, std::move(hv));
  out.upper = norm(X, out.g, cfg.norm).value * norm(Y, out.h, cfg.norm).value;
  return out;
}

struct LozanovskiiReport {
  double l1_norm = 0.0;
  ExtReal achieved;  // ‖g‖_X·‖h‖_{X^×} for the best split found
  double ratio = 0.0;
  bool reached = false;
  StepFunction g;
  StepFunction h;
};

// Searches a split f = g·h with ‖g‖_X·‖h‖_{X^×} <= (1+eps)‖f‖_{L1}, where the
// dual norm is mult_norm(·, X, L1). Failure to reach the target is reported
// through `reached`, not thrown.
inline LozanovskiiReport lozanovskii_check(const SpaceSpec& X, const StepFunction& f, double eps,
                                           const OptimizerConfig& cfg = {}) {
  check_compatible(X, f.model());
  const auto& model = f.model();
  const std::size_t n = f.size();
  const auto l1 = SpaceSpec::lp(1.0);
  LozanovskiiReport out{0.0, ExtReal(0.0), 0.0, true, StepFunction::zero(model), StepFunction::zero(model)};
  out.l1_norm = norm(l1, f, cfg.norm).value.value();
  const auto support = detail::support_by_value(f);
  if (support.empty()) return out;

  OptimizerConfig inner = cfg;
  inner.method = OptimizerMethod::coordinate_ascent;
  inner.restarts = 2;
  inner.iterations = 40;
  const auto dual = [&](const std::vector<double>& h) {
    return mult_norm(StepFunction(model, h), X, l1, inner).lower;
  };
  std::vector<double> h(n);
  const auto objective = [&](const std::vector<double>& g) -> double {
    for (std::size_t i = 0; i < n; ++i) h[i] = g[i] > 0.0 ? f[i] / g[i] : 0.0;
    const ExtReal gx = detail::raw_norm(X, g, model, cfg.norm);
    if (gx.is_inf()) return -kInf;
    const ExtReal hd = dual(h);
    if (hd.is_inf()) return -kInf;
    return -(gx.value() * hd.value());
  };

  std::vector<double> best_g;
  double best = -kInf;
  long evals = 0;
  const auto keep = [](std::vector<double>&) {};
  for (double theta : {0.5, 0.0, 1.0}) {
    std::vector<double> g(n, 0.0);
    for (std::size_t i : support) g[i] = std::pow(f[i], theta);
    const double v = detail::coordinate_search(objective, g, support, false, std::min(cfg.iterations, 60), 1e-4, keep,
                                               evals);
    if (v > best) {
      best = v;
      best_g = g;
    }
  }
  if (!(best > -kInf)) {
    out.achieved = ExtReal::infinity();
    out.ratio = kInf;
    out.reached = false;
    return out;
  }
  std::vector<double> hv(n, 0.0);
  for (std::size_t i : support) hv[i] = f[i] / best_g[i];
  out.achieved = ExtReal(-best);
  out.ratio = -best / out.l1_norm;
  out.reached = out.ratio <= 1.0 + eps;
  out.g = StepFunction(model, std::move(best_g));
  out.h = StepFunction(model, std::move(hv));
  return out;
}

}  // namespace clspace
