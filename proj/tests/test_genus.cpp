// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "fgc/errors.hpp"
#include "fgc/genus.hpp"

using namespace fgc;

namespace {

const Ring QQ = Ring::rationals();

// Dense bivariate oracle series: c[i][j] is the coefficient of y^i q^j.
struct Dense {
  int ny, nq;
  std::vector<std::vector<Rational>> c;
  Dense(int ny_, int nq_) : ny(ny_), nq(nq_), c(ny_ + 1, std::vector<Rational>(nq_ + 1, 0)) {}

  static Dense one(int ny, int nq) {
    Dense d(ny, nq);
    d.c[0][0] = 1;
    return d;
  }
  Dense operator*(const Dense& o) const {
    Dense r(ny, nq);
    for (int i = 0; i <= ny; ++i)
      for (int j = 0; j <= nq; ++j) {
        if (c[i][j] == 0) continue;
        for (int k = 0; i + k <= ny; ++k)
          for (int l = 0; j + l <= nq; ++l) r.c[i + k][j + l] += c[i][j] * o.c[k][l];
      }
    return r;
  }
  Dense operator+(const Dense& o) const {
    Dense r = *this;
    for (int i = 0; i <= ny; ++i)
      for (int j = 0; j <= nq; ++j) r.c[i][j] += o.c[i][j];
    return r;
  }
  Dense scaled(const Rational& s) const {
    Dense r = *this;
    for (auto& row : r.c)
      for (auto& v : row) v *= s;
    return r;
  }
  // Needs c[0] = 1 + O(q) with constant 1.
  Dense inverse() const {
    // 1 / (1 - u) with u = 1 - this, which is nilpotent in the truncation.
    Dense u = one(ny, nq) + scaled(-1);
    Dense r = one(ny, nq), p = one(ny, nq);
    for (int k = 1; k <= ny + nq + 1; ++k) {
      p = p * u;
      r = r + p;
    }
    return r;
  }
  Dense pow(int m) const {
    Dense base = m < 0 ? inverse() : *this;
    Dense r = one(ny, nq);
    for (int k = 0; k < std::abs(m); ++k) r = r * base;
    return r;
  }
  // y -> w y.
  Dense scale_y(long w) const {
    Dense r = *this;
    Rational p = 1;
    for (int i = 0; i <= ny; ++i, p *= w)
      for (auto& v : r.c[i]) v *= p;
    return r;
  }
  // exp of a series without constant term.
  Dense exp() const {
    Dense r = one(ny, nq), p = one(ny, nq);
    Rational f = 1;
    for (int k = 1; k <= ny + nq + 1; ++k) {
      p = p * *this;
      f *= k;
      r = r + p.scaled(Rational(1) / f);
    }
    return r;
  }
};

Rational inv_factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(Integer(1), f);
}

// Genus oracle: degree * [h^n] prod Q(w h)^m, per block, with Q dense in y.
Dense dense_genus(const ChernData& X, const Dense& Q) {
  Dense result = Dense::one(0, Q.nq);
  for (const auto& blk : X.blocks) {
    Dense prod = Dense::one(Q.ny, Q.nq);
    for (const auto& r : blk.roots)
      if (r.weight != 0) prod = prod * Q.scale_y(r.weight).pow(r.multiplicity);
    Dense coeff(0, Q.nq);
    for (int j = 0; j <= Q.nq; ++j) coeff.c[0][j] = prod.c[blk.top_power][j] * Rational(blk.degree);
    result = result * coeff;
  }
  return result;
}

// h / (1 - e^{-h}) with no q.
Dense dense_todd(int n) {
  Dense s(n, 0);
  for (int k = 0; k <= n; ++k) s.c[k][0] = (k % 2 ? -1 : 1) * inv_factorial(k + 1);
  return s.inverse();
}

// (y/2) / sinh(y/2).
Dense dense_ahat(int n, int nq) {
  Dense s(n, nq);
  Rational half_pow = 1;
  for (int k = 0; k <= n; ++k, half_pow /= 2)
    if (k % 2 == 0) s.c[k][0] = half_pow * inv_factorial(k + 1);
  return s.inverse();
}

Integer divisor_sigma(int k, int n) {
  Integer s = 0;
  for (int m = 1; m <= n; ++m)
    if (n % m == 0) {
      Integer p;
      mpz_ui_pow_ui(p.get_mpz_t(), m, k);
      s += p;
    }
  return s;
}

// A(y) exp(sum_r 2/(2r)! y^{2r} sum_n sigma_{2r-1}(n) q^n), the Witten
// characteristic series of a c_1 = 0 manifold.
Dense dense_witten(int n, int nq) {
  Dense S(n, nq);
  for (int r = 1; 2 * r <= n; ++r)
    for (int m = 1; m <= nq; ++m)
      S.c[2 * r][m] = 2 * inv_factorial(2 * r) * Rational(divisor_sigma(2 * r - 1, m));
  return dense_ahat(n, nq) * S.exp();
}

Ring ab_ring() { return Ring::parse("poly(QQ,a,b)"); }

}  // namespace

TEST_CASE("genus_eval examples") {
  auto one = GenusSeries(MultiSeries::constant(QQ, {"x"}, 4, QQ.one()));
  CHECK(genus_eval(ChernData::cp(2), one).is_zero());
  CHECK(genus_eval(ChernData::point(), one).is_one());
  for (int n = 1; n <= 6; ++n) {
    auto X = ChernData::cp(n);
    CHECK(genus_eval(X, todd_series(n)).is_one());
    CHECK(dense_genus(X, dense_todd(n)).c[0][0] == 1);
  }
  CHECK(genus_eval(ChernData::cp(2), ahat_series(2)) == QQ.from_rational(Rational(-1, 8)));
  // -p_1 / 24 with p_1 = c_1^2 - 2 c_2 = 9 - 6.
  CHECK(dense_genus(ChernData::cp(2), dense_ahat(2, 0)).c[0][0] == Rational(-1, 8));
  CHECK(genus_eval(ChernData::parse("cp1xcp1"), ahat_series(2)).is_zero());
  CHECK_THROWS_AS(genus_eval(ChernData::cp(3), ahat_series(2)), TruncationError);
  CHECK_THROWS_AS(GenusSeries(MultiSeries::variable(QQ, {"x"}, 3, "x")), InvalidArgument);
}

TEST_CASE("genus series agree with dense oracles") {
  auto todd = todd_series(8);
  auto dt = dense_todd(8);
  auto ahat = ahat_series(8);
  auto da = dense_ahat(8, 0);
  for (int k = 0; k <= 8; ++k) {
    CHECK(todd.series().coefficient(k) == QQ.from_rational(dt.c[k][0]));
    CHECK(ahat.series().coefficient(k) == QQ.from_rational(da.c[k][0]));
  }
  CHECK(todd_series_of(FormalGroupLaw::additive(QQ, 6)).series() ==
        MultiSeries::constant(QQ, {"x"}, 5, QQ.one()));
}

TEST_CASE("genera are multiplicative") {
  std::vector<ChernData> spaces{ChernData::cp(1), ChernData::cp(2), ChernData::parse("cp1xcp2"),
                                ChernData::hypersurface(2, 3)};
  auto Q = todd_series(8);
  auto A = ahat_series(8);
  for (const auto& X : spaces)
    for (const auto& Y : spaces) {
      CHECK(genus_eval(X.product(Y), Q) == genus_eval(X, Q) * genus_eval(Y, Q));
      CHECK(genus_eval(X.product(Y), A) == genus_eval(X, A) * genus_eval(Y, A));
    }
}

TEST_CASE("Euler characteristics") {
  for (int n = 0; n <= 6; ++n) CHECK(euler_characteristic(ChernData::cp(n)) == n + 1);
  CHECK(euler_characteristic(ChernData::parse("cp1xcp1")) == 4);
  CHECK(euler_characteristic(ChernData::hypersurface(2, 3)) == 9);  // cubic surface
  CHECK(euler_characteristic(ChernData::hypersurface(4, 6)) == 2610);
  CHECK(ChernData::hypersurface(4, 6).first_chern_class_vanishes());
}

TEST_CASE("Riemann-Roch") {
  auto Ga = FormalGroupLaw::additive(QQ, 6);
  auto x = MultiSeries::variable(QQ, {"x"}, 6, "x");
  auto rr = rr_transform(ChernData::cp(2), Ga, x);
  CHECK(rr.holds());
  CHECK(rr.lhs.is_zero());

  // theta = 1 - e^{-x} carries G_a to G_m; both sides give Todd(CP^1) = 1.
  MultiSeries::Terms t;
  for (int k = 1; k <= 6; ++k) t.emplace(Exponent{k}, QQ.from_rational((k % 2 ? 1 : -1) * inv_factorial(k)));
  auto todd_theta = MultiSeries(QQ, {"x"}, 6, t);
  auto rr1 = rr_transform(ChernData::cp(1), Ga, todd_theta);
  CHECK(rr1.lhs.is_one());
  CHECK(rr1.rhs.is_one());

  // Symbolic theta = x + a x^2 + b x^3 over Q[a, b].
  Ring AB = ab_ring();
  auto a = AB.generator("a"), b = AB.generator("b");
  auto X = MultiSeries::variable(AB, {"x"}, 8, "x");
  auto th = X + X.pow(2).scaled(a) + X.pow(3).scaled(b);
  for (const char* m : {"cp1", "cp2", "cp1xcp1"}) {
    auto r = rr_transform(ChernData::parse(m), FormalGroupLaw::additive(QQ, 8), th);
    CHECK(r.holds());
    auto rm = rr_transform(ChernData::parse(m), FormalGroupLaw::multiplicative(QQ, 8), th);
    CHECK(rm.holds());
  }
  // The Todd genus of CP^1 under x + a x^2 + ... is -2a: the transported
  // law has exp_G = theta, so Q = 1 - a y + ..., and (1 - a h)^2 gives -2a.
  auto r1 = rr_transform(ChernData::cp(1), FormalGroupLaw::additive(QQ, 8), th);
  CHECK(r1.lhs == AB.from_integer(-2) * a);

  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-5, 5), d(1, 4);
  for (int trial = 0; trial < 4; ++trial) {
    MultiSeries rand = x.truncated(8);
    auto x8 = MultiSeries::variable(QQ, {"x"}, 8, "x");
    rand = x8;
    for (int k = 2; k <= 8; ++k) rand += x8.pow(k).scaled(QQ.from_rational(Rational(c(rng), d(rng))));
    for (const char* m : {"cp1", "cp2", "cp1xcp1"})
      CHECK(rr_transform(ChernData::parse(m), FormalGroupLaw::multiplicative(QQ, 8), rand).holds());
  }
  CHECK_THROWS_AS(rr_transform(ChernData::cp(1), Ga, x.scaled(QQ.from_integer(2))),
                  NonStrictIsomorphism);
}

TEST_CASE("loop genus closed form under G_a is the A-hat genus") {
  Ring Qi = Ring::gaussian_rationals();
  Ring R = t_polynomials(Qi);
  auto t = R.generator("t");
  auto i = R.coerce(Qi.sqrt_d());
  for (const char* m : {"cp1", "cp2", "cp1xcp1"}) {
    auto X = ChernData::parse(m);
    const int d = X.dimension();
    auto ahat = genus_eval(X, ahat_series(std::max(d, 1)));
    auto expected = (R.from_integer(2) * i * t).pow(d) * R.coerce(Qi.coerce(ahat));
    CHECK(additive_loop_genus(X, Qi) == expected);
  }
  CHECK(additive_loop_genus(ChernData::cp(2), Qi) == R.from_rational(Rational(1, 2)) * t * t);
  // The closed series is ty / sin(ty).
  auto Q = additive_loop_series(6).series();
  const Ring& Rq = Q.ring();
  auto tq = Rq.generator("t");
  CHECK(Q.coefficient(2) == Rq.from_rational(Rational(1, 6)) * tq * tq);
  CHECK(Q.coefficient(4) == Rq.from_rational(Rational(7, 360)) * tq.pow(4));
}

TEST_CASE("loop genus and the quotient law") {
  CHECK(loop_genus(ChernData::point(), EquivariantContext::additive(3, 6, true, 3), 3).is_one());
  auto ga = EquivariantContext::additive(4, 6, true, 3);
  auto gm = EquivariantContext::multiplicative(4, 6, true, 3);
  CHECK(loop_vs_quotient_check(ChernData::point(), ga, 3));
  CHECK(loop_vs_quotient_check(ChernData::cp(1), ga, 3));
  CHECK(loop_vs_quotient_check(ChernData::cp(2), ga, 3));
  CHECK(loop_vs_quotient_check(ChernData::cp(2), gm, 3));
  CHECK(loop_vs_quotient_check(ChernData::parse("cp1xcp1"), gm, 2));

  // G_a at N = 1: Q = 1 / (1 - y^2 / qhat^2), so the CP^1 genus is 0 and
  // the CP^2 genus is 3 / qhat^2.
  auto ga1 = EquivariantContext::additive(3, 6, true, 1);
  CHECK(loop_genus(ChernData::cp(1), ga1, 1).is_zero());
  CHECK(loop_genus(ChernData::cp(2), ga1, 1) == ga1.coeff().from_integer(3) * ga1.qhat().pow(-2));

  // Raw and renormalized differ by the product of the [k](qhat).
  auto X = ChernData::cp(2);
  RingElement norm = gm.coeff().one();
  for (long k = 1; k <= 3; ++k) norm *= gm.k_qhat(k) * gm.k_qhat(-k);
  CHECK(loop_genus(X, gm, 3, LoopNormalization::raw) ==
        loop_genus(X, gm, 3) * norm.pow(-X.rank()));
  CHECK_THROWS_AS(loop_genus(X, gm, 3, LoopNormalization::sigma), NonConvergent);
  CHECK_THROWS_AS(loop_genus(X, EquivariantContext::additive(4, 6, false, 1), 1), NotAUnit);
}

TEST_CASE("sigma-normalized loop genus is the Witten genus") {
  const int qo = 6;
  auto X = ChernData::hypersurface(4, 6);
  auto ctx = EquivariantContext::multiplicative(5, qo, true, qo + 1);
  auto w = loop_genus(X, ctx, qo, LoopNormalization::sigma);
  auto oracle = dense_genus(X, dense_witten(4, qo));
  CHECK(w.precision() >= qo);
  for (int j = 0; j <= qo; ++j) CHECK(w.coefficient(j) == QQ.from_rational(oracle.c[0][j]));
  // Stable in N past the q-order, and equal to the renormalized value.
  CHECK(loop_genus(X, ctx, qo + 1, LoopNormalization::sigma) == w);
  CHECK(loop_genus(X, ctx, qo) == w);
  // The constant term is the A-hat genus.
  CHECK(w.coefficient(0) == genus_eval(X, ahat_series(4)));
}

TEST_CASE("chi residue") {
  auto c1 = chi_residue(ChernData::cp(1), Rational(1, 2));
  const Ring& R = c1.ring();
  auto t = R.parameter_element();
  CHECK(c1 == R.from_integer(2) * t);
  auto c2 = chi_residue(ChernData::cp(2), Rational(1, 2));
  CHECK(c2 == c2.ring().from_integer(3) * c2.ring().parameter_element().pow(2));
  CHECK(chi_residue(ChernData::point(), Rational(1, 3)).is_one());
  // (t / sin(pi/3))^2 chi = 4/3 t^2 * 4 for CP^1 x CP^1.
  auto c3 = chi_residue(ChernData::parse("cp1xcp1"), Rational(1, 3));
  const Ring& R3 = c3.ring();
  CHECK(R3.base() == Ring::quadratic(3));
  CHECK(c3 == R3.coerce(Ring::quadratic(3).from_rational(Rational(16, 3))) *
                   R3.parameter_element().pow(2));
  for (int n = 1; n <= 4; ++n) {
    auto c = chi_residue(ChernData::cp(n), Rational(3, 2));
    // sin(3 pi / 2) = -1.
    CHECK(c == c.ring().from_integer(n % 2 ? -(n + 1) : (n + 1)) * c.ring().parameter_element().pow(n));
  }
  CHECK_THROWS_AS(chi_residue(ChernData::cp(1), 1), PoleError);
  CHECK_THROWS_AS(chi_residue(ChernData::cp(1), Rational(1, 5)), UnrepresentableAngle);
}
