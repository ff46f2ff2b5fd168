#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ext_real.hpp"
#include "measure.hpp"
#include "young.hpp"

namespace clspace {

class SpaceSpec;

namespace space_kind {

struct Lp {
  double p;
};
struct Linf {};
// max{‖f‖_1, ‖f‖_∞}
struct L1capLinf {};
// ∫ f*(t) w(t) dt with one weight value per cell.
struct Lorentz {
  std::vector<double> weight;
};
// ‖|f|^p‖_base^{1/p}; p in (0,1) is the concavification.
struct Convexification {
  std::shared_ptr<const SpaceSpec> base;
  double p;
};
// Calderón–Lozanovskiĭ space base_F with the Luxemburg norm.
struct CL {
  std::shared_ptr<const SpaceSpec> base;
  YoungFunction young;
};

}  // namespace space_kind

using SpaceKind = std::variant<space_kind::Lp, space_kind::Linf, space_kind::L1capLinf, space_kind::Lorentz,
                               space_kind::Convexification, space_kind::CL>;

class SpaceSpec {
 public:
  static SpaceSpec lp(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("Lp: exponent must satisfy 1 <= p < ∞ (use Linf)");
    return SpaceSpec(space_kind::Lp{p});
  }
  static SpaceSpec linf() { return SpaceSpec(space_kind::Linf{}); }
  static SpaceSpec l1_cap_linf() { return SpaceSpec(space_kind::L1capLinf{}); }

  static SpaceSpec lorentz(std::vector<double> weight) {
    bool nonzero = false;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      if (!(weight[i] >= 0.0) || !std::isfinite(weight[i])) throw DomainError("lorentz: weights must be finite and nonnegative");
      if (i > 0 && weight[i] > weight[i - 1]) throw DomainError("lorentz: weight must be non-increasing");
      nonzero = nonzero || weight[i] > 0.0;
    }
    if (!nonzero) throw DomainError("lorentz: weight must not vanish identically");
    return SpaceSpec(space_kind::Lorentz{std::move(weight)});
  }

  static SpaceSpec convexification(SpaceSpec base, double p) {
    if (!(p > 0.0) || std::isinf(p) || p == 1.0) {
      throw DomainError("convexification: exponent must be positive, finite and different from 1");
    }
    return SpaceSpec(space_kind::Convexification{std::make_shared<const SpaceSpec>(std::move(base)), p});
  }

  static SpaceSpec cl(SpaceSpec base, YoungFunction F) {
    return SpaceSpec(space_kind::CL{std::make_shared<const SpaceSpec>(std::move(base)), std::move(F)});
  }

  const SpaceKind& kind() const { return kind_; }

  template <typename K>
  const K* as() const {
    return std::get_if<K>(&kind_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, space_kind::Lp>) {
            return "L" + format_number(k.p);
          } else if constexpr (std::is_same_v<K, space_kind::Linf>) {
            return "Linf";
          } else if constexpr (std::is_same_v<K, space_kind::L1capLinf>) {
            return "L1capLinf";
          } else if constexpr (std::is_same_v<K, space_kind::Lorentz>) {
            return "Lorentz(" + std::to_string(k.weight.size()) + " weights)";
          } else if constexpr (std::is_same_v<K, space_kind::Convexification>) {
            return std::string(k.p > 1.0 ? "convexification(" : "concavification(") + k.base->describe() + ",p=" +
                   format_number(k.p) + ")";
          } else {
            return "CL(" + k.base->describe() + "," + k.young.describe() + ")";
          }
        },
        kind_);
  }

 private:
  explicit SpaceSpec(SpaceKind k) : kind_(std::move(k)) {}
  SpaceKind kind_;
};

struct NormConfig {
  double rtol_norm = 1e-10;
  int max_doublings = 2000;
  SolverConfig young;
};

enum class NormMethod { closed_form, bisection };

struct NormValue {
  ExtReal value;
  NormMethod method = NormMethod::closed_form;
  int iterations = 0;
};

inline void check_compatible(const SpaceSpec& X, const MeasureModel& model) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, space_kind::Lorentz>) {
          if (k.weight.size() != model.cells()) {
            throw ModelMismatch("lorentz weight has " + std::to_string(k.weight.size()) + " entries but " +
                                model.describe() + " has " + std::to_string(model.cells()) + " cells");
          }
        } else if constexpr (std::is_same_v<K, space_kind::Convexification> || std::is_same_v<K, space_kind::CL>) {
          check_compatible(*k.base, model);
        }
      },
      X.kind());
}

inline NormValue luxemburg_norm(const SpaceSpec& X, const YoungFunction& F, const StepFunction& f,
                                const NormConfig& cfg = {});

namespace detail {

// Norm of a nonnegative finite vector on `model`, without compatibility checks.
inline ExtReal raw_norm(const SpaceSpec& X, std::span<const double> v, const MeasureModel& model,
                        const NormConfig& cfg);

inline double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline ExtReal powered_norm(const SpaceSpec& base, std::span<const double> v, double p, const MeasureModel& model,
                            const NormConfig& cfg) {
  const double m = max_of(v);
  if (m == 0.0) return ExtReal(0.0);
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::pow(v[i] / m, p);
  const ExtReal inner = raw_norm(base, w, model, cfg);
  if (inner.is_inf()) return inner;
  return ExtReal(m * std::pow(inner.value(), 1.0 / p));
}

inline ExtReal raw_norm(const SpaceSpec& X, std::span<const double> v, const MeasureModel& model,
                        const NormConfig& cfg) {
  const double mu = model.cell_measure();
  return std::visit(
      [&](const auto& k) -> ExtReal {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, space_kind::Lp>) {
          const double m = max_of(v);
          if (m == 0.0) return ExtReal(0.0);
          double acc = 0.0;
          for (double x : v) acc += std::pow(x / m, k.p);
          return ExtReal(m * std::pow(acc * mu, 1.0 / k.p));
        } else if constexpr (std::is_same_v<K, space_kind::Linf>) {
          return ExtReal(max_of(v));
        } else if constexpr (std::is_same_v<K, space_kind::L1capLinf>) {
          double acc = 0.0;
          for (double x : v) acc += x;
          return ExtReal(std::max(acc * mu, max_of(v)));
        } else if constexpr (std::is_same_v<K, space_kind::Lorentz>) {
          std::vector<double> s(v.begin(), v.end());
          std::sort(s.begin(), s.end(), std::greater<>());
          double acc = 0.0;
          for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] * k.weight[i];
          return ExtReal(acc * mu);
        } else if constexpr (std::is_same_v<K, space_kind::Convexification>) {
          return powered_norm(*k.base, v, k.p, model, cfg);
        } else {
          return luxemburg_norm(*k.base, k.young, StepFunction(model, std::vector<double>(v.begin(), v.end())), cfg)
              .value;
        }
      },
      X.kind());
}

// ‖F(|v|/λ)‖_X, ∞ as soon as one cell maps to ∞.
inline ExtReal modular_scaled(const SpaceSpec& X, const YoungFunction& F, std::span<const double> v, double lambda,
                              const MeasureModel& model, const NormConfig& cfg) {
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = F.raw(v[i] / lambda);
    if (std::isinf(w[i])) return ExtReal::infinity();
  }
  return raw_norm(X, w, model, cfg);
}

}  // namespace detail

inline NormValue norm(const SpaceSpec& X, const StepFunction& f, const NormConfig& cfg = {}) {
  check_compatible(X, f.model());
  if (const auto* k = X.as<space_kind::CL>()) return luxemburg_norm(*k->base, k->young, f, cfg);
  return {detail::raw_norm(X, f.values(), f.model(), cfg), NormMethod::closed_form, 0};
}

// M_F(f) = ‖F(|f|)‖_X.
inline ExtReal modular(const SpaceSpec& X, const YoungFunction& F, const StepFunction& f, const NormConfig& cfg = {}) {
  check_compatible(X, f.model());
  return detail::modular_scaled(X, F, f.values(), 1.0, f.model(), cfg);
}

// inf{λ > 0 : M_F(f/λ) <= 1}. Power and truncated power kinds use the
// homogeneity of the base norm; everything else bisects on λ.
inline NormValue luxemburg_norm(const SpaceSpec& X, const YoungFunction& F, const StepFunction& f,
                                const NormConfig& cfg) {
  check_compatible(X, f.model());
  const auto v = f.values();
  const auto& model = f.model();
  const double m = f.sup();
  if (m == 0.0) return {ExtReal(0.0), NormMethod::closed_form, 0};
  if (F.is_degenerate()) return {ExtReal::infinity(), NormMethod::closed_form, 0};

  const auto power_closed_form = [&](double p) -> ExtReal {
    const ExtReal s = detail::powered_norm(X, v, p, model, cfg);
    if (s.is_inf()) return s;
    return ExtReal(s.value() / std::pow(p, 1.0 / p));
  };
  if (const auto* k = F.as<young_kind::Power>()) {
    return {power_closed_form(k->p), NormMethod::closed_form, 0};
  }
  if (const auto* k = F.as<young_kind::TruncatedPower>()) {
    return {max(power_closed_form(k->p), ExtReal(m / k->b)), NormMethod::closed_form, 0};
  }

  const auto feasible = [&](double lambda) {
    return detail::modular_scaled(X, F, v, lambda, model, cfg) <= ExtReal(1.0);
  };

  int iterations = 0;
  double lo = 0.0;
  const double b = F.jump_raw();
  if (std::isfinite(b)) {
    lo = m / b;
    if (feasible(lo)) return {ExtReal(lo), NormMethod::bisection, 0};
  } else {
    lo = m;
    while (feasible(lo)) {
      lo *= 0.5;
      if (++iterations > cfg.max_doublings) return {ExtReal(0.0), NormMethod::bisection, iterations};
    }
  }

  double scale = 1.0;
  const std::vector<double> ones(v.size(), 1.0);
  const ExtReal unit = detail::raw_norm(X, ones, model, cfg);
  if (unit.is_finite() && unit.value() > 0.0) {
    const ExtReal inv = right_inverse(F, ExtReal(1.0 / unit.value()), cfg.young);
    if (inv.is_finite() && inv.value() > 0.0) scale = std::max(1.0, 1.0 / inv.value());
  }
  double hi = std::max(m * scale, lo);
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++iterations > cfg.max_doublings) return {ExtReal::infinity(), NormMethod::bisection, iterations};
  }

  while ((hi - lo) > cfg.rtol_norm * hi && iterations < 10000) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
    ++iterations;
  }
  return {ExtReal(hi), NormMethod::bisection, iterations};
}

struct FundamentalValue {
  double measure = 0.0;  // t after rounding to whole cells
  ExtReal value;         // norm of the indicator
  std::optional<ExtReal> formula;  // 1/F⁻¹(1/ψ_base(t)) for CL specs
  double relative_gap = 0.0;
  bool agrees = true;
};

// ψ_X(t) = ‖1_{[0,t)}‖_X. For CL specs the value is computed both from the
// Luxemburg norm of the indicator and from the base fundamental function;
// a relative gap above 1e-6 is flagged through `agrees`.
inline FundamentalValue fundamental(const SpaceSpec& X, const MeasureModel& model, double t,
                                    const NormConfig& cfg = {}) {
  check_compatible(X, model);
  const auto ind = indicator(model, t);
  FundamentalValue out;
  out.measure = ind.rounded_measure;
  out.value = norm(X, ind.function, cfg).value;
  const auto* k = X.as<space_kind::CL>();
  if (k == nullptr || ind.function.is_zero()) return out;

  const ExtReal psi_base = fundamental(*k->base, model, t, cfg).value;
  ExtReal formula;
  if (psi_base.is_inf()) {
    formula = ExtReal::infinity();
  } else {
    const ExtReal inv = right_inverse(k->young, ExtReal(1.0 / psi_base.value()), cfg.young);
    formula = inv.is_inf() ? ExtReal(0.0) : (inv.is_zero() ? ExtReal::infinity() : ExtReal(1.0 / inv.value()));
  }
  out.formula = formula;
  if (formula.is_inf() || out.value.is_inf()) {
    out.agrees = formula.is_inf() && out.value.is_inf();
    out.relative_gap = out.agrees ? 0.0 : kInf;
  } else {
    const double a = formula.value();
    const double c = out.value.value();
    out.relative_gap = std::abs(a - c) / std::max({std::abs(a), std::abs(c), 1e-300});
    out.agrees = out.relative_gap <= 1e-6;
  }
  return out;
}

// ψ_X(0+) > 0 in the continuum limit, decided from the space description:
// sequence spaces, Linf and L1capLinf are bounded below; CL spaces are
// bounded below when the base is or when F jumps (ψ_{X_F}(0+) = 1/b_F).
inline bool psi_bounded_below(const SpaceSpec& X, const MeasureModel& model) {
  if (model.is_sequence_space()) return true;
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, space_kind::Linf> || std::is_same_v<K, space_kind::L1capLinf>) {
          return true;
        } else if constexpr (std::is_same_v<K, space_kind::Convexification>) {
          return psi_bounded_below(*k.base, model);
        } else if constexpr (std::is_same_v<K, space_kind::CL>) {
          return psi_bounded_below(*k.base, model) || k.young.jumps();
        } else {
          return false;
        }
      },
      X.kind());
}

// X ↪ L∞ iff ψ_X does not vanish at zero.
inline bool embeds_into_linf(const SpaceSpec& X, const MeasureModel& model) { return psi_bounded_below(X, model); }

// L∞ ↪ X iff ψ_X is bounded: always on the unit interval, otherwise only for
// Linf-type specs. Lorentz weights are only known up to the horizon and are
// treated as non-integrable.
inline bool linf_embeds_into(const SpaceSpec& X, const MeasureModel& model) {
  if (model.kind() == ModelKind::unit_interval) return true;
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, space_kind::Linf>) {
          return true;
        } else if constexpr (std::is_same_v<K, space_kind::Convexification> || std::is_same_v<K, space_kind::CL>) {
          return linf_embeds_into(*k.base, model);
        } else {
          return false;
        }
      },
      X.kind());
}

inline bool is_linf(const SpaceSpec& X) { return X.as<space_kind::Linf>() != nullptr; }

}  // namespace clspace
