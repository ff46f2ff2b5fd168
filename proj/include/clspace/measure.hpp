#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ext_real.hpp"

namespace clspace {

// Raised when functions and spaces from different discretizations meet.
class ModelMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ModelKind { unit_interval, half_line, counting };

// Equal-measure discretization of [0,1], [0,T] ⊂ [0,∞), or {1..n}.
class MeasureModel {
 public:
  static MeasureModel unit_interval(std::size_t cells) { return MeasureModel(ModelKind::unit_interval, cells, 1.0); }

  static MeasureModel half_line(double horizon, std::size_t cells) {
    if (!(horizon > 0.0) || std::isinf(horizon)) throw DomainError("half_line: horizon must be positive and finite");
    return MeasureModel(ModelKind::half_line, cells, horizon);
  }

  static MeasureModel counting(std::size_t atoms) {
    return MeasureModel(ModelKind::counting, atoms, static_cast<double>(atoms));
  }

  ModelKind kind() const { return kind_; }
  std::size_t cells() const { return cells_; }
  double total_measure() const { return total_; }
  double cell_measure() const { return total_ / static_cast<double>(cells_); }
  bool is_sequence_space() const { return kind_ == ModelKind::counting; }

  std::string describe() const {
    switch (kind_) {
      case ModelKind::unit_interval:
        return "unit_interval(n=" + std::to_string(cells_) + ")";
      case ModelKind::half_line:
        return "half_line(T=" + format_number(total_) + ",n=" + std::to_string(cells_) + ")";
      case ModelKind::counting:
        return "counting(n=" + std::to_string(cells_) + ")";
    }
    return {};
  }

  friend bool operator==(const MeasureModel&, const MeasureModel&) = default;

 private:
  MeasureModel(ModelKind kind, std::size_t cells, double total) : kind_(kind), cells_(cells), total_(total) {
    if (cells == 0) throw DomainError("measure model needs at least one cell");
  }

  ModelKind kind_;
  std::size_t cells_;
  double total_;
};

// Nonnegative step function: one finite value per cell.
class StepFunction {
 public:
  // Signs are discarded at ingestion (|f| is all the norms see).
  StepFunction(MeasureModel model, std::vector<double> values) : model_(model), values_(std::move(values)) {
    if (values_.size() != model_.cells()) {
      throw ModelMismatch("step function has " + std::to_string(values_.size()) + " values but the model has " +
                          std::to_string(model_.cells()) + " cells");
    }
    for (double& v : values_) {
      if (!std::isfinite(v)) throw DomainError("step function values must be finite");
      v = std::abs(v);
    }
  }

  static StepFunction zero(const MeasureModel& model) { return {model, std::vector<double>(model.cells(), 0.0)}; }

  const MeasureModel& model() const { return model_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double sup() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }
  bool is_zero() const { return sup() == 0.0; }

  StepFunction scaled(double c) const {
    auto v = values_;
    for (double& x : v) x *= c;
    return {model_, std::move(v)};
  }

  StepFunction map(const std::function<double(double)>& fn) const {
    auto v = values_;
    for (double& x : v) x = fn(x);
    return {model_, std::move(v)};
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  MeasureModel model_;
  std::vector<double> values_;
};

inline void require_same_model(const StepFunction& f, const StepFunction& g) {
  if (!(f.model() == g.model())) {
    throw ModelMismatch("functions live on different models: " + f.model().describe() + " vs " +
                        g.model().describe());
  }
}

inline StepFunction pointwise_product(const StepFunction& f, const StepFunction& g) {
  require_same_model(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * g[i];
  return {f.model(), std::move(v)};
}

// f*: values sorted non-increasingly (exact on equal cells).
inline StepFunction rearrange(const StepFunction& f) {
  std::vector<double> v(f.values().begin(), f.values().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return {f.model(), std::move(v)};
}

struct Indicator {
  StepFunction function;
  double rounded_measure;
};

// 1_{[0,t)} with t rounded to the nearest whole number of cells.
inline Indicator indicator(const MeasureModel& model, double t) {
  if (!(t >= 0.0)) throw DomainError("indicator: measure must be nonnegative");
  const double mu = model.cell_measure();
  if (t > model.total_measure() * (1.0 + 1e-12)) {
    throw DomainError("indicator: measure " + format_number(t) + " exceeds total " +
                      format_number(model.total_measure()));
  }
  const auto k = std::min(static_cast<std::size_t>(std::llround(t / mu)), model.cells());
  std::vector<double> v(model.cells(), 0.0);
  std::fill_n(v.begin(), k, 1.0);
  return {StepFunction(model, std::move(v)), static_cast<double>(k) * mu};
}

}  // namespace clspace
