// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fgc/errors.hpp"
#include "fgc/tate.hpp"

using namespace fgc;

namespace {

// Dense oracle for sigma: coefficient table c[j][b + off] of q^j L^b for
// (1 - L) prod_{k<=M} (1 - q^k L)(1 - q^k / L) / (1 - q^k)^2, computed with
// plain integers.
struct DenseSigma {
  int order;
  int off;
  std::vector<std::vector<Integer>> c;

  DenseSigma(int order_, int cutoff) : order(order_), off(order_ + 4) {
    const int width = 2 * off + 1;
    c.assign(order + 1, std::vector<Integer>(width, 0));
    c[0][off] = 1;
    c[0][off + 1] = -1;
    for (int k = 1; k <= cutoff; ++k) {
      // (1 - q^k L)(1 - q^k / L) = 1 + q^{2k} - q^k L - q^k L^{-1}.
      auto next = c;
      for (int j = 0; j <= order; ++j)
        for (int b = 0; b < width; ++b) {
          if (c[j][b] == 0) continue;
          if (j + 2 * k <= order) next[j + 2 * k][b] += c[j][b];
          if (j + k <= order) {
            if (b + 1 < width) next[j + k][b + 1] -= c[j][b];
            if (b >= 1) next[j + k][b - 1] -= c[j][b];
          }
        }
      c = next;
      // 1 / (1 - q^k)^2 = sum_m (m + 1) q^{km}.
      for (int rep = 0; rep < 2; ++rep) {
        next = c;
        for (int j = 0; j <= order; ++j)
          for (int b = 0; b < width; ++b)
            for (int m = 1; j + k * m <= order; ++m) next[j + k * m][b] += c[j][b];
        c = next;
      }
    }
  }

  Integer at(int j, int b) const {
    if (b + off < 0 || b + off >= static_cast<int>(c[0].size())) return 0;
    return c[j][b + off];
  }
};

RingElement q_poly(const Ring& R, std::vector<std::pair<long, long>> terms) {
  RingElement out = R.zero();
  for (auto [e, c] : terms) out += R.monomial(R.base().from_integer(c), e);
  return out;
}

}  // namespace

TEST_CASE("theta under G_a at N = 1") {
  auto ga = EquivariantContext::additive(6, 6, true, 2);
  auto th = theta(ga, 1);
  const Ring& R = ga.coeff();
  auto x = MultiSeries::variable(R, {"x"}, 6, "x");
  auto qinv2 = MultiSeries::constant(R, {"x"}, 6, ga.qhat().pow(-2));
  CHECK(th.series == x - qinv2 * x.pow(3));
  CHECK(theta_kernel_holds(ga, th));
}

TEST_CASE("theta kernel and strictness") {
  for (int N = 1; N <= 3; ++N) {
    auto ga = EquivariantContext::additive(2 * N + 2, 8, true, N);
    auto gm = EquivariantContext::multiplicative(2 * N + 2, 8, true, N);
    for (const auto* ctx : {&ga, &gm}) {
      auto th = theta(*ctx, N);
      CHECK(theta_kernel_holds(*ctx, th));
      CHECK(th.series.constant_term().is_zero());
      CHECK(th.series.coefficient(1).constant_coefficient() == Ring::rationals().one());
      // The unnormalized product differs by prod [k](qhat).
      RingElement norm = ctx->coeff().one();
      for (long k = 1; k <= N; ++k) norm *= ctx->k_qhat(k) * ctx->k_qhat(-k);
      CHECK(theta_unnormalized(*ctx, N) == th.series.scaled(norm));
    }
  }
  auto plain = EquivariantContext::additive(4, 6, false, 1);
  CHECK_THROWS_AS(theta(plain, 1), NotAUnit);
}

TEST_CASE("additive closed form is sin(tx)/t") {
  auto s = theta_additive_closed(9);
  const Ring& R = s.ring();
  auto t = R.generator("t");
  Integer f = 1;
  for (int n = 1; n <= 9; ++n) {
    f *= n;
    RingElement expected = R.zero();
    if (n % 2) {
      expected = R.from_rational(Rational(Integer(((n - 1) / 2) % 2 ? -1 : 1), f)) * t.pow(n - 1);
    }
    CHECK(s.coefficient(n) == expected);
  }
  CHECK(s.coefficient(3) == R.from_rational(Rational(-1, 6)) * t * t);
}

TEST_CASE("sigma against a dense oracle") {
  for (int order : {0, 1, 2, 5, 8}) {
    Ring R = sigma_ring(order);
    auto s = sigma(R);
    DenseSigma oracle(order, order);
    for (int b = -order - 3; b <= order + 3; ++b) {
      RingElement expected = R.zero();
      for (int j = 0; j <= order; ++j) expected += R.monomial(R.base().from_integer(oracle.at(j, b)), j);
      CHECK(s.coefficient(b) == expected);
      CHECK(s.coefficient(b).precision() >= order);
    }
  }
  Ring R0 = sigma_ring(0);
  CHECK(sigma(R0).agrees_with(LSeries(R0, {{0, R0.one()}, {1, -R0.one()}}), -4, 4));

  // Order q^2. The q^1 part is (1 - L)(2 - L - 1/L); the q^2 part also sees
  // the k = 2 factor: (1 - L)(6 - 3L - 3/L).
  Ring R2 = sigma_ring(2);
  auto s2 = sigma(R2);
  LSeries inner(R2, {{-1, q_poly(R2, {{1, -1}, {2, -3}})},
                     {0, q_poly(R2, {{0, 1}, {1, 2}, {2, 6}})},
                     {1, q_poly(R2, {{1, -1}, {2, -3}})}});
  LSeries one_minus_L(R2, {{0, R2.one()}, {1, -R2.one()}});
  CHECK(s2.agrees_with(one_minus_L * inner, -5, 5));

  // sigma(1, q) = 0.
  Ring R6 = sigma_ring(6);
  RingElement at_one = R6.zero();
  const LSeries s6 = sigma(R6);
  for (const auto& [b, c] : s6.coefficients()) at_one += c;
  CHECK(at_one.is_zero());
}

TEST_CASE("sigma functional equation") {
  for (int order : {4, 8}) {
    Ring R = sigma_ring(order);
    auto s = sigma(R);
    CHECK(s.substitute_q_power(1).agrees_with(s.times(-R.one(), -1), -6, 6));
  }
  // With room to spare every compared coefficient is known to q^8.
  Ring R = sigma_ring(14);
  auto s = sigma(R);
  auto lhs = s.substitute_q_power(1);
  auto rhs = s.times(-R.one(), -1);
  CHECK(lhs.min_precision(-6, 6) >= 8);
  CHECK(lhs.agrees_with(rhs, -6, 6));
  // A wrong sign is caught.
  CHECK_FALSE(lhs.agrees_with(s.times(R.one(), -1), -6, 6));
}

TEST_CASE("modified sigma") {
  Ring R = sigma_ring(6);
  auto s = sigma(R);
  CHECK(sigma_modified(R, Rational(1, 3)).agrees_with(s, -8, 8));
  CHECK(sigma_modified(R, 0).agrees_with(s, -8, 8));
  auto q_inv = R.monomial(R.base().one(), -1);
  CHECK(sigma_modified(R, 1).agrees_with(s.times(-q_inv, 1), -8, 8));
  // sigma[qL, r + 1] = sigma[L, r].
  for (Rational r : {Rational(1, 2), Rational(-3, 2), Rational(7, 3)}) {
    auto lhs = sigma_modified(R, r + 1).substitute_q_power(1);
    CHECK(lhs.agrees_with(sigma_modified(R, r), -4, 4));
  }
}

TEST_CASE("theta under G_m is L^N sigma_N") {
  for (int N = 3; N <= 6; ++N) {
    const int qo = N + 1;
    // Room for N + 1 so both cutoffs share one coefficient ring.
    auto ctx = EquivariantContext::multiplicative(2 * N + 4, qo, true, N + 1);
    auto L = theta_in_L(theta(ctx, N));
    CHECK(L.min_precision(-N - 3, N + 3) == qo);
    const Ring& R = ctx.coeff();
    CHECK(L.truncated(N).agrees_with(sigma(R).truncated(N), -N - 3, N + 3));
    // The finite product is sigma_N exactly at the working order.
    CHECK(L.agrees_with(sigma(R, N), -N - 3, N + 3));
    if (N < 6) {
      auto L2 = theta_in_L(theta(ctx, N + 1));
      CHECK(L2.truncated(N).agrees_with(L.truncated(N), -N - 3, N + 3));
    }
  }
}

TEST_CASE("L-series precision bookkeeping") {
  Ring R = sigma_ring(4);
  LSeries a(R, {{0, R.one()}}, 4, 0);
  CHECK(a.coefficient(3).is_zero());
  CHECK(a.coefficient(3).precision() == 4);
  auto b = a.substitute_q_power(1);
  CHECK(b.absent_precision(-2) == 2);
  CHECK(b.absent_precision(2) == 6);
  CHECK_THROWS_AS(a * a, InvalidArgument);
  CHECK_THROWS_AS(b.truncated(2), InvalidArgument);
  auto x = MultiSeries::variable(R, {"x"}, 3, "x");
  // f(x) = x maps to 1 - L and back.
  auto f = lseries_at_one_minus(x);
  CHECK(f.agrees_with(LSeries(R, {{0, R.one()}, {1, -R.one()}}), -3, 3));
  CHECK(lseries_in_x(f, "x", 3) == x);
  CHECK_THROWS_AS(lseries_at_one_minus(x.pow(3)), TruncationError);
}

TEST_CASE("angles and the modified sine") {
  for (int den : {1, 2, 3, 4, 6})
    for (int num = -2 * den; num <= 2 * den; ++num) {
      Rational r(num, den);
      r.canonicalize();
      auto s = sin_pi(r), c = cos_pi(r);
      CHECK(s * s + c * c == s.ring().one());
    }
  CHECK(sin_pi(Rational(1, 6)) == Ring::quadratic(3).from_rational(Rational(1, 2)));
  CHECK(sin_pi(Rational(-1, 2)) == Ring::rationals().from_integer(-1));
  CHECK(angle_field(Rational(1, 4)) == Ring::quadratic(2));
  CHECK(cos_pi(Rational(1, 4)) == Ring::quadratic(2).sqrt_d() *
                                      Ring::quadratic(2).from_rational(Rational(1, 2)));
  CHECK_THROWS_AS(sin_pi(Rational(1, 5)), UnrepresentableAngle);
  CHECK_THROWS_AS(sine_modified(Rational(2, 5), 4), UnrepresentableAngle);

  auto s0 = sine_modified(Rational(0), 7);
  const Ring& R = s0.ring();
  auto t = R.parameter_element();
  CHECK(s0.coefficient(1) == R.one());
  CHECK(s0.coefficient(3) == R.from_rational(Rational(-1, 6)) * t * t);
  CHECK(s0.coefficient(0).is_zero());

  // r = 1/2 gives -cos(tx)/t.
  auto sh = sine_modified(Rational(1, 2), 7);
  CHECK(sh.coefficient(0) == -t.inverse());
  CHECK(sh.coefficient(2) == R.from_rational(Rational(1, 2)) * t);
  CHECK(sh.coefficient(1).is_zero());

  // Periodicity: shifting x by qhat turns tx into tx + pi.
  for (Rational r : {Rational(0), Rational(1, 3), Rational(-1, 4), Rational(5, 6)}) {
    auto shifted = sine_modified(half_turn(sine_form(r + 1)), 8);
    CHECK(shifted == sine_modified(r, 8));
  }

  // Symbolic s, c with s^2 + c^2 = 1.
  Ring K = Ring::parse("poly(poly(QQ,s),c:c^2+s^2-1)");
  auto s = K.coerce(K.base().generator("s")), c = K.generator("c");
  auto form = sine_form_symbolic(s, c);
  auto sym = sine_modified(form, 5);
  auto Ts = sym.ring().parameter_element();
  CHECK(sym.coefficient(0) == -sym.ring().coerce(s) * Ts.inverse());
  CHECK(sine_modified(half_turn(half_turn(form)), 5) == sym);
}

TEST_CASE("Tate group products") {
  Ring A = Ring::parse("poly(QQ,eps:eps^3)");
  auto eps = A.generator("eps");
  auto F = FormalGroupLaw::multiplicative(Ring::rationals(), 4);
  TateGroup G(F, A, eps);
  auto g = eps * A.from_integer(2), h = eps * eps;
  auto gh = g + h - g * h;
  auto p = tate_mul(G, G.point(g, Rational(1, 4)), G.point(h, Rational(1, 2)));
  CHECK(G.equal(p, TatePoint{gh, Rational(3, 4)}));
  auto p2 = tate_mul(G, G.point(g, Rational(1, 2)), G.point(h, Rational(2, 3)));
  // (gh - eps) / (1 - eps) under x -_F y = (x - y)/(1 - y).
  auto diff = (gh - eps) * (A.one() - eps).inverse();
  CHECK(G.equal(p2, TatePoint{diff, Rational(1, 6)}));
  CHECK(G.equal(tate_mul(G, G.identity(), p2), p2));
  CHECK(G.equal(tate_mul(G, p2, tate_inv(G, p2)), G.identity()));
  CHECK_THROWS_AS(G.point(A.one(), 0), InvalidArgument);
  CHECK_THROWS_AS(G.point(eps, 1), InvalidArgument);
  Ring B = Ring::parse("poly(QQ,eps:eps^2)");
  CHECK_THROWS_AS(tate_mul(G, p, TatePoint{B.generator("eps"), 0}), RingMismatch);
}

TEST_CASE("Tate torsion orders") {
  Ring A9 = Ring::parse("poly(ZZ/9,eps:eps^2)");
  auto e9 = A9.generator("eps");
  TateGroup G9(FormalGroupLaw::additive(Ring::rationals(), 3).base_change(A9), A9,
               A9.from_integer(3) * e9);
  auto o = torsion_order(G9, G9.point(e9, 0), 20);
  REQUIRE(o);
  CHECK(9 % *o == 0);

  TateGroup G0(FormalGroupLaw::additive(Ring::rationals(), 3).base_change(A9), A9, A9.zero());
  CHECK(torsion_order(G0, G0.point(A9.zero(), Rational(1, 3)), 10) == std::optional<long>(3));
  CHECK(torsion_order(G0, G0.identity(), 10) == std::optional<long>(1));
  CHECK_FALSE(torsion_order(G0, G0.point(A9.zero(), Rational(1, 7)), 5));

  // Brute force for G_m over Z/4[eps]/(eps^2), qhat = 2 eps, point (eps, 1/2):
  // iterate (g, a) -> (g + e - g e, a + 1/2) with the carry g -> (g - q)/(1 - q).
  Ring A4 = Ring::parse("poly(ZZ/4,eps:eps^2)");
  auto e4 = A4.generator("eps");
  auto qh = A4.from_integer(2) * e4;
  TateGroup G4(FormalGroupLaw::multiplicative(Ring::integers(), 3).base_change(A4), A4, qh);
  RingElement g = e4;
  Rational a(1, 2);
  long brute = 0;
  for (long n = 1; n <= 50; ++n) {
    if (g.is_zero() && a == 0) {
      brute = n;
      break;
    }
    g = g + e4 - g * e4;
    a += Rational(1, 2);
    if (a >= 1) {
      a -= 1;
      g = (g - qh) * (A4.one() - qh).inverse();
    }
  }
  CHECK(brute > 0);
  CHECK(torsion_order(G4, G4.point(e4, Rational(1, 2)), 50) == std::optional<long>(brute));
  CHECK(G4.equal(tate_pow(G4, G4.point(e4, Rational(1, 2)), brute), G4.identity()));
}

TEST_CASE("Tate exact sequence") {
  Ring A9 = Ring::parse("poly(ZZ/9,eps:eps^2)");
  auto e9 = A9.generator("eps");
  TateGroup G(FormalGroupLaw::additive(Ring::rationals(), 3).base_change(A9), A9,
              A9.from_integer(3) * e9);
  auto report = exact_sequence_check(G, {A9.from_integer(3), e9}, 40, 7);
  CHECK(report.ok());
  CHECK(report.samples == 40);
  CHECK(report.failures.empty());

  Ring A = Ring::parse("poly(QQ,eps:eps^3)");
  auto eps = A.generator("eps");
  TateGroup Gm(FormalGroupLaw::multiplicative(Ring::rationals(), 4), A, eps);
  CHECK(exact_sequence_check(Gm, {eps, eps * eps}, 40, 3).ok());
}
