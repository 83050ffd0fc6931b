// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>

#include "fgc/errors.hpp"
#include "fgc/prospectrum.hpp"
#include "fgc/tate.hpp"

using namespace fgc;

namespace {

using Dense = std::map<long, long>;

Dense dense_mul(const Dense& a, const Dense& b) {
  Dense out;
  for (auto [i, x] : a)
    for (auto [j, y] : b) out[i + j] += x * y;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

// prod_{0<|k|<=n} (1 - q^k) by direct expansion.
Dense dense_u(int n) {
  Dense u{{0, 1}};
  for (int k = 1; k <= n; ++k) {
    u = dense_mul(u, Dense{{0, 1}, {k, -1}});
    u = dense_mul(u, Dense{{0, 1}, {-k, -1}});
  }
  return u;
}

RingElement from_dense(const Ring& R, const Dense& d) {
  RingElement out = R.zero();
  for (auto [k, c] : d) out += R.from_integer(c) * R.parameter_element().pow(k);
  return out;
}

bool exact_coefficients(const MultiSeries& f) {
  for (const auto& [e, c] : f.terms())
    if (c.precision() != kExactPrecision) return false;
  return true;
}

EqBundle trivial(int rank) { return EqBundle{{EqBlock{"", 0, 0, rank}}}; }
EqBundle line_bundle(const std::string& r, int m = 1) { return EqBundle{{EqBlock{r, 1, 0, m}}}; }

}  // namespace

TEST_CASE("G_a transition and unit over a point") {
  auto ga = EquivariantContext::additive(4, 12, true, 6);
  ThomTower T(ga, trivial(1));
  const RingElement& qh = ga.qhat();
  CHECK(T.transition(1).constant_term() == -(qh * qh));
  CHECK(T.unit_u(2).constant_term() == ga.coeff().from_integer(4) * qh.pow(4));
  // (-1)^n (n!)^2 qhat^{2n}.
  long fact = 1;
  for (int n = 1; n <= 6; ++n) {
    fact *= n;
    long sign = n % 2 ? -1 : 1;
    CHECK(T.unit_u(n).constant_term() == ga.coeff().from_integer(sign * fact * fact) * qh.pow(2 * n));
  }
}

TEST_CASE("G_m unit against direct expansion") {
  auto gm = EquivariantContext::multiplicative(4, 24, true, 6);
  ThomTower T(gm, trivial(1));
  for (int n = 0; n <= 6; ++n) {
    auto u = T.unit_u(n);
    CHECK(exact_coefficients(u));
    CHECK(u.constant_term() == from_dense(gm.coeff(), dense_u(n)));
  }
  ThomTower T2(gm, trivial(2));
  auto d = dense_u(4);
  CHECK(T2.unit_u(4).constant_term() == from_dense(gm.coeff(), dense_mul(d, d)));
}

TEST_CASE("omega commutes with the transitions") {
  for (bool mult : {false, true}) {
    auto ctx = mult ? EquivariantContext::multiplicative(3, 48, true, 6)
                    : EquivariantContext::additive(3, 48, true, 6);
    for (auto V : {line_bundle("h"), EqBundle{{EqBlock{"h", 1, 0, 1}, EqBlock{"", 0, 0, 1}}},
                   line_bundle("h", 2)}) {
      ThomTower T(ctx, V, std::vector<std::string>{"h"});
      auto s = T.constant(ctx.coeff().one()) + MultiSeries::variable(ctx.coeff(), {"h"}, 3, "h");
      for (int n = 1; n <= 6; ++n) {
        auto lhs = T.push(T.omega(n - 1, s), n);
        auto rhs = T.omega(n, s);
        CHECK(lhs.stage == n);
        CHECK(exact_coefficients(rhs.value));
        CHECK(lhs.value == rhs.value);
        CHECK(T.unit_u(n) == T.unit_u(n - 1) * T.transition(n));
        CHECK(T.equivalent(T.omega(1, s), rhs));
      }
      CHECK_THROWS_AS(T.push(T.omega(3, s), 2), InvalidArgument);
    }
  }
}

TEST_CASE("unlocalized contexts have no units") {
  auto ga = EquivariantContext::additive(3, 4, false, 2);
  ThomTower T(ga, trivial(1));
  CHECK_NOTHROW(T.transition(1));
  CHECK_THROWS_AS(T.unit_u(1), NotAUnit);
  CHECK_THROWS_AS(T.omega(1, T.constant(ga.coeff().one())), NotAUnit);
}

TEST_CASE("relative omega is theta over x and a ratio of units") {
  for (bool mult : {false, true}) {
    auto ctx = mult ? EquivariantContext::multiplicative(6, 5, true, 4)
                    : EquivariantContext::additive(6, 5, true, 4);
    ThomTower T(ctx, line_bundle("x"));
    ThomTower C(ctx, trivial(1), std::vector<std::string>{"x"});
    auto x = MultiSeries::variable(ctx.coeff(), {"x"}, 6, "x");
    for (int N = 1; N <= 3; ++N) {
      auto rel = relative_omega(T, N);
      CHECK(rel * x == theta(ctx, N, "x").series);
      CHECK(rel * C.unit_u(N) == T.unit_u(N));
    }
  }
}

TEST_CASE("G_m stabilization") {
  auto gm = EquivariantContext::multiplicative(6, 8, true, 8);
  ThomTower T(gm, line_bundle("x"));
  auto st = stabilize(T, 3);
  CHECK(st.N_stable == 3);
  CHECK(st.matches_closed_form);
  for (int qo = 0; qo <= 6; ++qo) {
    auto s = stabilize(T, qo);
    CHECK(s.N_stable <= qo + 1);
    CHECK(s.matches_closed_form);
  }
  CHECK_THROWS_AS(stabilize(T, 3, StabilizeForm::raw), NonConvergent);
  CHECK_THROWS_AS(stabilize(T, 9), TruncationError);

  // L (+) L^{-1}: the raw products converge.
  auto gm2 = EquivariantContext::multiplicative(4, 6, true, 6);
  ThomTower P(gm2, EqBundle{{EqBlock{"x", 1, 0, 1}, EqBlock{"x", -1, 0, 1}}});
  auto raw = stabilize(P, 3, StabilizeForm::raw);
  auto sig = stabilize(P, 3);
  CHECK(raw.N_stable == sig.N_stable);
  CHECK(raw.series == sig.series);
}

TEST_CASE("G_a stabilization is the closed sine form") {
  auto ga = EquivariantContext::additive(6, 4, true, 4);
  ThomTower T(ga, line_bundle("x", 2));
  auto st = stabilize(T, 4);
  CHECK(st.N_stable == 4);
  CHECK(st.matches_closed_form);
  Ring Rt = t_polynomials();
  // (sin(tx)/(tx))^2 = 1 - t^2 x^2 / 3 + 2 t^4 x^4 / 45 + ...
  auto t = Rt.generator("t");
  CHECK(st.series.coefficient(2) == Rt.from_rational(Rational(-1, 3)) * t.pow(2));
  CHECK(st.series.coefficient(4) == Rt.from_rational(Rational(2, 45)) * t.pow(4));
}

TEST_CASE("tower examples") {
  auto gm = EquivariantContext::multiplicative(4, 8, true, 8);
  const Ring& R = gm.coeff();
  auto q = R.parameter_element();
  ThomTower T(gm, trivial(1));
  CHECK(T.transition(1).constant_term() == (R.one() - q) * (R.one() - q.pow(-1)));
  ThomTower T0(gm, EqBundle{});
  CHECK(T0.transition(3).constant_term().is_one());
  CHECK(T.unit_u(0).constant_term().is_one());
  auto s = T.constant(R.from_integer(5));
  auto w0 = T.omega(0, s);
  CHECK(w0.stage == 0);
  CHECK(w0.value == s);
  for (int n = 1; n <= 8; ++n) CHECK(T.unit_u(n) == T.unit_u(n - 1) * T.transition(n));
  // Equivalence is stage-compatible and transitive.
  auto a = T.omega(1, s), b = T.push(a, 3), c = T.omega(5, s);
  CHECK(T.equivalent(a, b));
  CHECK(T.equivalent(b, c));
  CHECK(T.equivalent(a, c));
  CHECK_FALSE(T.equivalent(a, T.omega(1, T.constant(R.from_integer(4)))));
  CHECK_THROWS_AS(T.transition(0), InvalidArgument);
}

TEST_CASE("relative omega examples") {
  auto ga = EquivariantContext::additive(4, 6, true, 2);
  const Ring& R = ga.coeff();
  ThomTower P(ga, EqBundle{});
  CHECK(relative_omega(P, 2).constant_term().is_one());
  CHECK(relative_omega(P, 2).terms().size() == 1);
  ThomTower T(ga, line_bundle("x"));
  auto x = MultiSeries::variable(R, {"x"}, 4, "x");
  auto one = T.constant(R.one());
  // (x + qhat)(x - qhat) / (-qhat^2) = 1 - x^2 / qhat^2.
  CHECK(relative_omega(T, 1) == one - MultiSeries::constant(R, {"x"}, 4, ga.qhat().pow(-2)) * x * x);
  ThomTower W(ga, EqBundle{{EqBlock{"x", 1, 1, 1}}});
  CHECK_THROWS_AS(relative_omega(W, 1), InvalidArgument);
}

TEST_CASE("transitions are units exactly when localized") {
  for (bool loc : {true, false}) {
    auto ga = EquivariantContext::additive(3, 6, loc, 4);
    auto gm = EquivariantContext::multiplicative(3, 6, loc, 4);
    for (const auto* ctx : {&ga, &gm})
      for (long n = 1; n <= 4; ++n)
        for (long s : {n, -n}) CHECK(unit_check(*ctx, trivial(1).twisted(s)) == loc);
  }
}

TEST_CASE("stabilize at q-order 0") {
  auto gm = EquivariantContext::multiplicative(4, 3, true, 4);
  ThomTower T(gm, line_bundle("x"));
  auto st = stabilize(T, 0);
  CHECK(st.N_stable == 0);
  CHECK(st.matches_closed_form);
  // 1 + O(q) in every coefficient.
  CHECK(st.series.constant_term().coefficient(0).is_one());
  for (const auto& [e, c] : st.series.terms())
    if (e[0] > 0) CHECK(c.coefficient(0).is_zero());
}
