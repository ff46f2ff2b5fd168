#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace clspace {

// Raised when a value or argument lies outside an operation's domain
// (negative arguments, 0·∞ products, truncation bounds beyond b_F, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Nonnegative extended real: a finite value in [0, ∞) or the value +∞.
//
// Arithmetic follows extended-real conventions, except that 0·∞ is an error.
// A double overflowing to +inf is absorbed as ∞; NaN and negative input are
// rejected.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtReal(double v) {
    if (std::isnan(v) || v < 0.0) {
      throw DomainError("ExtReal: value must be nonnegative, got " + std::to_string(v));
    }
    if (std::isinf(v)) {
      infinite_ = true;
    } else {
      value_ = v;
    }
  }

  static ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  bool is_inf() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  bool is_zero() const { return !infinite_ && value_ == 0.0; }

  double value() const {
    if (infinite_) throw DomainError("ExtReal: finite value requested from ∞");
    return value_;
  }

  // Lossy view for reporting and comparisons against plain doubles.
  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }

  friend ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    if ((a.infinite_ && b.is_zero()) || (b.infinite_ && a.is_zero())) {
      throw DomainError("ExtReal: 0·∞ is not evaluated");
    }
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ * b.value_);
  }

  friend ExtReal operator/(const ExtReal& a, double c) {
    if (!(c > 0.0) || std::isinf(c)) throw DomainError("ExtReal: divisor must be positive and finite");
    if (a.infinite_) return infinity();
    return ExtReal(a.value_ / c);
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && a.value_ == b.value_;
  }

  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

// Renders with 10 significant digits; ∞ is the literal "inf".
inline std::string format_number(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  if (std::isinf(v)) return "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string format_number(const ExtReal& v) { return format_number(v.to_double()); }

}  // namespace clspace
