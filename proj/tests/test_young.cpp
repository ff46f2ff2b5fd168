#include <catch_amalgamated.hpp>

#include <clspace/young.hpp>

using namespace clspace;

namespace {

// Brute-force sup over a uniform s-grid on [0, top].
double grid_sup(const YoungFunction& G, const YoungFunction& F, double t, double top, int n = 200000) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = top * i / n;
    const double g = G.raw(s * t);
    const double f = F.raw(s);
    if (std::isinf(f)) continue;
    if (std::isinf(g)) return kInf;
    best = std::max(best, g - f);
  }
  return best;
}

// inf{t : F(t) > s} by scanning a fine grid.
double scan_inverse(const YoungFunction& F, double s, double top, int n = 1000000) {
  for (int i = 0; i <= n; ++i) {
    const double t = top * i / n;
    if (F.raw(t) > s) return t;
  }
  return top;
}

}  // namespace

TEST_CASE("evaluate closed forms") {
  CHECK(YoungFunction::power(2)(2.0).value() == 2.0);
  CHECK(YoungFunction::power(4)(2.0).value() == 4.0);
  CHECK(YoungFunction::truncated_power(2, 1)(1.5).is_inf());
  CHECK(YoungFunction::truncated_power(2, 1)(1.0).value() == 0.5);
  CHECK(YoungFunction::exp_minus_one()(1.0).value() == Catch::Approx(std::exp(1.0) - 1.0));
  const auto pl = YoungFunction::piecewise_linear({{0, 0}, {1, 1}, {2, 3}});
  CHECK(pl(0.5).value() == 0.5);
  CHECK(pl(1.5).value() == 2.0);
  CHECK(pl(3.0).value() == 5.0);
  for (const auto& F : {YoungFunction::power(1.5), YoungFunction::truncated_power(3, 2), YoungFunction::exp_minus_one(),
                        pl, YoungFunction::degenerate()}) {
    CHECK(F(0.0).is_zero());
    CHECK_THROWS_AS(F(-1.0), DomainError);
  }
}

TEST_CASE("jump points") {
  CHECK(YoungFunction::power(2).is_finite_function());
  CHECK(YoungFunction::truncated_power(2, 3).jump_raw() == 3.0);
  CHECK(YoungFunction::truncated_power(2, 3).jumps());
  CHECK(YoungFunction::degenerate().is_degenerate());
  CHECK(YoungFunction::degenerate()(1e-9).is_inf());
}

TEST_CASE("construction rejects invalid functions") {
  CHECK_THROWS_AS(YoungFunction::power(0.5), DomainError);
  CHECK_THROWS_AS(YoungFunction::truncated_power(2, 0), DomainError);
  CHECK_THROWS_AS(YoungFunction::piecewise_linear({{0, 0}, {1, 2}, {2, 3}}), DomainError);
  CHECK_THROWS_AS(YoungFunction::piecewise_linear({{0, 1}, {1, 2}}), DomainError);
  CHECK_THROWS_AS(YoungFunction::piecewise_linear({{0, 0}, {1, 0}}), DomainError);
}

TEST_CASE("functions are nondecreasing and convex below the jump") {
  const std::vector<YoungFunction> fs = {YoungFunction::power(1.3), YoungFunction::power(4),
                                         YoungFunction::truncated_power(2.5, 2), YoungFunction::exp_minus_one(),
                                         YoungFunction::piecewise_linear({{0, 0}, {0.5, 0.1}, {2, 3}})};
  for (const auto& F : fs) {
    const double top = std::min(F.jump_raw(), 5.0);
    double prev = 0.0;
    for (int i = 1; i < 400; ++i) {
      const double t0 = top * (i - 1) / 400, t1 = top * i / 400, t2 = top * (i + 1) / 400;
      const double v1 = F.raw(t1);
      CHECK(v1 >= prev);
      prev = v1;
      if (t2 <= top) CHECK(v1 <= 0.5 * (F.raw(t0) + F.raw(t2)) + 1e-12 * (1 + v1));
    }
  }
}

TEST_CASE("right inverse examples") {
  CHECK(right_inverse(YoungFunction::power(2), ExtReal(1.0)).value() == Catch::Approx(std::sqrt(2.0)));
  CHECK(right_inverse(YoungFunction::power(1), ExtReal::infinity()).is_inf());
  const auto trunc = YoungFunction::truncated_power(2, 1);
  CHECK(right_inverse(trunc, ExtReal(10.0)).value() == Catch::Approx(scan_inverse(trunc, 10.0, 2.0)).margin(1e-5));
  CHECK(right_inverse(trunc, ExtReal::infinity()).value() == 1.0);
}

TEST_CASE("right inverse matches a scan oracle and composes to identity") {
  SolverConfig generic;
  generic.force_generic = true;
  const auto table = conjugate(YoungFunction::power(2), YoungFunction::power(4), generic);
  const std::vector<YoungFunction> fs = {YoungFunction::power(3), YoungFunction::exp_minus_one(),
                                         YoungFunction::piecewise_linear({{0, 0}, {1, 0.5}, {3, 4.5}}), table};
  for (const auto& F : fs) {
    for (double s : {0.01, 0.3, 1.0, 2.5}) {
      const double inv = right_inverse(F, ExtReal(s)).value();
      CHECK(inv == Catch::Approx(scan_inverse(F, s, 8.0)).margin(2e-5));
      CHECK(F.raw(inv) == Catch::Approx(s).epsilon(1e-4));
    }
  }
}

TEST_CASE("conjugate of power functions") {
  const auto H = conjugate(YoungFunction::power(2), YoungFunction::power(4));
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(H(t).value() == Catch::Approx(std::pow(t, 4) / 4).epsilon(1e-12));
    CHECK(H(t).value() == Catch::Approx(grid_sup(YoungFunction::power(2), YoungFunction::power(4), t, 4.0 * t * t + 1)).epsilon(1e-4));
  }
  CHECK(H(0.0).is_zero());
  CHECK(conjugate(YoungFunction::power(4), YoungFunction::power(2)).is_degenerate());
}

TEST_CASE("generic conjugate agrees with the closed form") {
  SolverConfig generic;
  generic.force_generic = true;
  const auto H = conjugate(YoungFunction::power(2), YoungFunction::power(4), generic);
  for (int k = -6; k <= 6; ++k) {
    const double t = std::ldexp(1.0, k);
    CHECK(H(t).value() == Catch::Approx(std::pow(t, 4) / 4).epsilon(1e-4));
  }
  CHECK(is_convex_within_tolerance(H));
}

TEST_CASE("conjugate of a jumping outer function by a finite one is degenerate") {
  const auto H = conjugate(YoungFunction::truncated_power(2, 1), YoungFunction::power(4));
  CHECK(H.is_degenerate());
  for (double t : {1e-6, 0.1, 1.0, 10.0}) CHECK(H(t).is_inf());
  CHECK(H(0.0).is_zero());
}

TEST_CASE("truncated conjugate piecewise identity") {
  const auto G = YoungFunction::truncated_power(2, 3);
  const auto F = YoungFunction::power(4);
  const auto H = conjugate_truncated(G, F, 1.0);
  CHECK(H(0.5).value() == Catch::Approx(0.015625).margin(1e-6));
  CHECK(H(2.0).value() == Catch::Approx(1.75).margin(1e-6));
  CHECK(H(3.5).is_inf());
  for (double t : {0.3, 0.8, 1.5, 2.5}) {
    CHECK(H(t).value() == Catch::Approx(grid_sup(G, F, t, 1.0)).margin(1e-6));
  }
  CHECK_THROWS_AS(conjugate_truncated(G, YoungFunction::truncated_power(2, 1), 1.0), DomainError);
  CHECK_THROWS_AS(conjugate_truncated(G, F, 0.0), DomainError);
}

TEST_CASE("truncated conjugate with a dominated outer function vanishes up to the jump") {
  const auto G = YoungFunction::truncated_power(2, 2);
  const auto H = conjugate_truncated(G, YoungFunction::power(4), 1.0);
  CHECK(H(0.5).to_double() == Catch::Approx(grid_sup(G, YoungFunction::power(4), 0.5, 1.0)).margin(1e-6));
  CHECK(H(2.5).is_inf());
}

TEST_CASE("truncated conjugate tends to the full conjugate") {
  const auto G = YoungFunction::power(2);
  const auto F = YoungFunction::truncated_power(4, 2);
  const auto full = conjugate(G, F);
  double prev = 0.0;
  for (double a : {0.5, 1.0, 1.5, 1.9, 1.999}) {
    const double v = conjugate_truncated(G, F, a)(3.0).value();
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  CHECK(prev == Catch::Approx(full(3.0).value()).epsilon(1e-3));
}

TEST_CASE("classical conjugate") {
  const auto F2 = classical_conjugate(YoungFunction::power(2));
  for (double t : {0.5, 1.0, 3.0}) CHECK(F2(t).value() == Catch::Approx(t * t / 2).epsilon(1e-6));
  const auto lin = classical_conjugate(YoungFunction::power(1));
  CHECK(lin(0.7).is_zero());
  CHECK(lin(1.5).is_inf());
  const auto F4 = classical_conjugate(YoungFunction::power(4));
  const double q = 4.0 / 3.0;
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(F4(t).value() == Catch::Approx(std::pow(t, q) / q).epsilon(1e-4));
    CHECK(F4(t).value() == Catch::Approx(grid_sup(YoungFunction::power(1), YoungFunction::power(4), t, 4.0)).epsilon(1e-4));
  }
}

TEST_CASE("generalized young inequality") {
  const auto G = YoungFunction::power(2);
  const auto F = YoungFunction::power(4);
  const double r0 = young_inequality_residual(G, F, 1.0, 0.0, 5.0);
  CHECK(r0 == Catch::Approx(conjugate_at(G, F, 1.0, 5.0).value.value()));
  CHECK(young_inequality_residual(G, F, 1.0, 0.5, 0.5) >= 0.0);
  for (double t : {0.2, 0.7, 1.3, 4.0}) {
    const auto sr = conjugate_at(G, F, 1.0, t);
    CHECK(young_inequality_residual(G, F, 1.0, sr.argmax, t) <= 1e-6 * std::max(1.0, sr.value.value()));
    for (double s : {0.0, 0.1, 0.5, 0.9, 1.0}) CHECK(young_inequality_residual(G, F, 1.0, s, t) >= -1e-9);
  }
  CHECK_THROWS_AS(young_inequality_residual(G, F, 1.0, 2.0, 1.0), DomainError);
}
