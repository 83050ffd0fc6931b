// SPDX-License-Identifier: Apache-2.0
#include "fgc/tate.hpp"

#include <algorithm>

#include "fgc/errors.hpp"

namespace fgc {

namespace {

RingElement inverse_or_throw(const RingElement& c, long k) {
  auto inv = c.try_inverse();
  if (!inv)
    throw NotAUnit("[" + std::to_string(k) + "](qhat) = " + c.to_string() + " is not a unit of " +
                   c.ring().describe());
  return *inv;
}

// Valuation used for precision bookkeeping; an inexact zero counts as one
// past its precision.
long effective_valuation(const RingElement& e) {
  if (e.is_zero()) return e.is_exact_zero() ? kExactPrecision : e.precision() + 1;
  return e.valuation();
}

long sat(long a, long b) {
  if (a >= kExactPrecision || b >= kExactPrecision) return kExactPrecision;
  return a + b;
}

Rational factorial_inverse(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(Integer(1), f);
}

long to_long(const Rational& r) { return r.get_num().get_si(); }

// sin(pi m / 12) as a + b sqrt(d) for the multiples m of 2 or 3.
std::pair<Rational, Rational> sin_twelfths(long m) {
  m = ((m % 24) + 24) % 24;
  if (m >= 12) {
    auto [a, b] = sin_twelfths(m - 12);
    return {-a, -b};
  }
  if (m > 6) return sin_twelfths(12 - m);
  switch (m) {
    case 0: return {0, 0};
    case 2: return {Rational(1, 2), 0};
    case 3:
    case 4: return {0, Rational(1, 2)};
    case 6: return {1, 0};
  }
  throw UnrepresentableAngle("sin(pi*" + std::to_string(m) + "/12)");
}

long twelfths(const Rational& r) {
  const Integer& den = r.get_den();
  if (den != 1 && den != 2 && den != 3 && den != 4 && den != 6)
    throw UnrepresentableAngle("sin(pi*" + to_string(r) + ") needs adjoined symbols");
  Rational m = r * 12;
  return to_long(m);
}

RingElement trig_value(const Rational& r, long shift) {
  Ring K = angle_field(r);
  auto [a, b] = sin_twelfths(twelfths(r) + shift);
  RingElement v = K.from_rational(a);
  if (b != 0) v += K.from_rational(b) * K.sqrt_d();
  return v;
}

}  // namespace

MultiSeries theta_factor(const EquivariantContext& ctx, const MultiSeries& x, long k) {
  const Ring& R = ctx.coeff();
  RingElement c = ctx.k_qhat(k);
  MultiSeries num = formal_sum(ctx.law(), x, c);
  // Multiply numerator and denominator by q^{-v} so the inverse is taken of a
  // q-adic unit and keeps the full precision. The shift goes in steps no
  // larger than the order, since q^s itself may lie past it.
  if (R.kind() == RingKind::laurent && !c.is_zero())
    for (long s = -c.valuation(); s > 0;) {
      const long step = std::min<long>(s, std::max(R.order(), 1));
      RingElement m = R.monomial(R.base().one(), step);
      num = num.scaled(m);
      c *= m;
      s -= step;
    }
  return num.scaled(inverse_or_throw(c, k));
}

ThetaSeries theta(const EquivariantContext& ctx, int N, const std::string& var) {
  if (N < 1) throw InvalidArgument("theta needs N >= 1");
  MultiSeries x = MultiSeries::variable(ctx.coeff(), {var}, ctx.trunc(), var);
  MultiSeries series = x;
  for (long k = 1; k <= N; ++k)
    for (long s : {k, -k}) series *= theta_factor(ctx, x, s);
  return ThetaSeries{ctx.law(), N, series};
}

MultiSeries theta_unnormalized(const EquivariantContext& ctx, int N, const std::string& var) {
  if (N < 1) throw InvalidArgument("theta needs N >= 1");
  MultiSeries x = MultiSeries::variable(ctx.coeff(), {var}, ctx.trunc(), var);
  MultiSeries series = x;
  for (long k = 1; k <= N; ++k)
    for (long s : {k, -k}) series *= formal_sum(ctx.law(), x, ctx.k_qhat(s));
  return series;
}

bool theta_kernel_holds(const EquivariantContext& ctx, const ThetaSeries& th) {
  for (long k = 1; k <= th.N; ++k)
    for (long s : {k, -k})
      if (!ms_evaluate(th.series, ctx.k_qhat(s)).is_zero()) return false;
  return true;
}

Ring t_polynomials(const Ring& field) { return Ring::polynomial(field, {Generator{"t", {}}}); }

MultiSeries theta_additive_closed(int trunc, const Ring& field, const std::string& var) {
  Ring R = t_polynomials(field);
  RingElement t = R.generator("t");
  MultiSeries::Terms terms;
  for (int n = 1; n <= trunc; n += 2) {
    RingElement c = R.from_rational(factorial_inverse(n)) * t.pow(n - 1);
    terms.emplace(Exponent{n}, (n / 2) % 2 ? -c : c);
  }
  return MultiSeries(R, {var}, trunc, std::move(terms));
}

// ---------------------------------------------------------------------------

LSeries::LSeries(Ring qring, std::map<long, RingElement> coeffs, long base_precision, long slope)
    : ring_(qring), base_(base_precision), slope_(slope) {
  if (base_ >= kExactPrecision) {
    base_ = kExactPrecision;
    slope_ = 0;
  }
  for (auto& [b, c] : coeffs) {
    RingElement v = ring_.coerce(c);
    if (!v.is_exact_zero()) coeffs_.emplace(b, std::move(v));
  }
}

long LSeries::absent_precision(long b) const {
  if (is_exact()) return kExactPrecision;
  return base_ + slope_ * b;
}

RingElement LSeries::coefficient(long b) const {
  auto it = coeffs_.find(b);
  if (it != coeffs_.end()) return it->second;
  if (is_exact()) return ring_.zero();
  return ring_.series_element({}, absent_precision(b));
}

LSeries LSeries::substitute_q_power(long s) const {
  std::map<long, RingElement> out;
  for (const auto& [b, c] : coeffs_) out.emplace(b, c * ring_.monomial(ring_.base().one(), s * b));
  return LSeries(ring_, std::move(out), base_, slope_ + s);
}

LSeries LSeries::times(const RingElement& c0, long e) const {
  RingElement c = ring_.coerce(c0);
  if (c.is_exact_zero()) return LSeries(ring_, {});
  std::map<long, RingElement> out;
  for (const auto& [b, v] : coeffs_) out.emplace(b + e, c * v);
  long base = is_exact() ? kExactPrecision : base_ - slope_ * e + effective_valuation(c);
  return LSeries(ring_, std::move(out), base, slope_);
}

LSeries operator*(const LSeries& a, const LSeries& b) {
  if (a.ring_ != b.ring_) throw RingMismatch("L-series over " + a.ring_.describe() + " and " +
                                             b.ring_.describe());
  if (!a.is_exact() && !b.is_exact())
    throw InvalidArgument("product of two L-series with unknown tails");
  const LSeries& X = a.is_exact() ? b : a;  // the possibly inexact factor
  const LSeries& Y = a.is_exact() ? a : b;
  std::map<long, RingElement> out;
  for (const auto& [i, x] : X.coeffs_)
    for (const auto& [j, y] : Y.coeffs_) {
      auto it = out.find(i + j);
      if (it == out.end())
        out.emplace(i + j, x * y);
      else
        it->second += x * y;
    }
  long base = kExactPrecision;
  if (!X.is_exact()) {
    long m = kExactPrecision;
    for (const auto& [j, y] : Y.coeffs_) m = std::min(m, sat(effective_valuation(y), -X.slope_ * j));
    base = sat(X.base_, m);
  }
  if (base < kExactPrecision)
    for (auto& [k, c] : out) c += X.ring_.series_element({}, base + X.slope_ * k);
  return LSeries(X.ring_, std::move(out), base, X.slope_);
}

LSeries operator-(const LSeries& a) {
  std::map<long, RingElement> out;
  for (const auto& [b, c] : a.coeffs_) out.emplace(b, -c);
  return LSeries(a.ring_, std::move(out), a.base_, a.slope_);
}

LSeries LSeries::truncated(long p) const {
  if (slope_ != 0) throw InvalidArgument("truncating an L-series with sloped precision");
  std::map<long, RingElement> out;
  for (const auto& [b, c] : coeffs_) out.emplace(b, c + ring_.series_element({}, p));
  return LSeries(ring_, std::move(out), std::min(base_, p), 0);
}

long LSeries::min_precision(long lo, long hi) const {
  long p = kExactPrecision;
  for (long b = lo; b <= hi; ++b) p = std::min(p, coefficient(b).precision());
  return p;
}

bool LSeries::agrees_with(const LSeries& other, long lo, long hi) const {
  if (ring_ != other.ring_) return false;
  for (long b = lo; b <= hi; ++b)
    if (coefficient(b) != other.coefficient(b)) return false;
  return true;
}

std::string LSeries::to_string() const {
  std::string out;
  for (const auto& [b, c] : coeffs_) {
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")";
    if (b == 1)
      out += "*L";
    else if (b != 0)
      out += "*L^" + std::to_string(b);
  }
  if (out.empty()) out = "0";
  if (!is_exact()) {
    out += "; absent coefficients O(" + ring_.parameter() + "^(" + std::to_string(base_ + 1);
    if (slope_ != 0) out += (slope_ > 0 ? " + " : " - ") + std::to_string(std::labs(slope_)) + "*b";
    out += "))";
  }
  return out;
}

Ring sigma_ring(int qorder) {
  if (qorder < 0) throw InvalidArgument("negative q-order");
  return Ring::laurent(Ring::rationals(), "q", qorder, 4 * (qorder + 2) * (qorder + 2));
}

LSeries sigma(const Ring& qring, std::optional<int> cutoff) {
  if (!qring.is_series()) throw InvalidArgument("sigma needs a q-series ring");
  const int order = qring.order();
  const int M = cutoff.value_or(order);
  if (M < 0) throw InvalidArgument("negative sigma cutoff");
  const RingElement one = qring.one();
  const RingElement q = qring.parameter_element();
  LSeries s(qring, {{0, one}, {1, -one}});
  for (int k = 1; k <= M; ++k) {
    RingElement qk = q.pow(k);
    s = s * LSeries(qring, {{-1, -qk}, {0, one + qk * qk}, {1, -qk}});
    s = s.times((one - qk).inverse().pow(2), 0);
  }
  // Coefficients past the order were dropped along the way.
  return LSeries(qring, s.coefficients(), order, 0);
}

LSeries sigma_modified(const Ring& qring, const Rational& r) {
  const long f = to_long(floor_of(r));
  RingElement c = qring.monomial(qring.base().one(), -f * (f + 1) / 2);
  if (f % 2) c = -c;
  return sigma(qring).times(c, f);
}

LSeries lseries_at_one_minus(const MultiSeries& f) {
  if (f.vars().size() != 1) throw InvalidArgument("expected a univariate series");
  if (!f.is_polynomial())
    throw TruncationError("x = 1 - L needs a polynomial, the top degree of " + f.to_string() +
                          " is occupied");
  const Ring& R = f.ring();
  std::map<long, RingElement> out;
  for (const auto& [e, c] : f.terms()) {
    const int j = e[0];
    for (int i = 0; i <= j; ++i) {
      Integer binom;
      mpz_bin_uiui(binom.get_mpz_t(), j, i);
      RingElement v = c * R.from_integer(i % 2 ? Integer(-binom) : binom);
      auto it = out.find(i);
      if (it == out.end())
        out.emplace(i, v);
      else
        it->second += v;
    }
  }
  return LSeries(R, std::move(out));
}

MultiSeries lseries_in_x(const LSeries& s, const std::string& var, int trunc) {
  if (s.slope() != 0) throw InvalidArgument("x = 1 - L needs a bounded precision");
  const Ring& R = s.ring();
  MultiSeries one = MultiSeries::constant(R, {var}, trunc, R.one());
  MultiSeries omx = one - MultiSeries::variable(R, {var}, trunc, var);
  MultiSeries inv = ms_inverse(omx);
  MultiSeries out(R, {var}, trunc);
  for (const auto& [b, c] : s.coefficients())
    out += (b >= 0 ? omx.pow(static_cast<int>(b)) : inv.pow(static_cast<int>(-b))).scaled(c);
  if (!s.is_exact()) {
    MultiSeries::Terms unknown;
    for (int n = 0; n <= trunc; ++n)
      unknown.emplace(Exponent{n}, R.series_element({}, s.base_precision()));
    out += MultiSeries(R, {var}, trunc, std::move(unknown));
  }
  return out;
}

LSeries theta_in_L(const ThetaSeries& th) {
  const Ring& R = th.series.ring();
  return lseries_at_one_minus(th.series).times(R.one(), -th.N);
}

// ---------------------------------------------------------------------------

Ring angle_field(const Rational& r) {
  const Integer& den = r.get_den();
  if (den == 1 || den == 2) return Ring::rationals();
  if (den == 3 || den == 6) return Ring::quadratic(3);
  if (den == 4) return Ring::quadratic(2);
  throw UnrepresentableAngle("sin(pi*" + to_string(r) + ") needs adjoined symbols");
}

RingElement sin_pi(const Rational& r) { return trig_value(r, 0); }
RingElement cos_pi(const Rational& r) { return trig_value(r, 6); }

TrigForm sine_form(const Rational& r) { return TrigForm{cos_pi(r), -sin_pi(r)}; }

TrigForm sine_form_symbolic(const RingElement& s, const RingElement& c) {
  if (s.ring() != c.ring()) throw RingMismatch("sin and cos symbols in different rings");
  return TrigForm{c, -s};
}

TrigForm half_turn(const TrigForm& f) { return TrigForm{-f.a, -f.b}; }

MultiSeries trig_series(const TrigForm& f, const RingElement& t, int trunc, const std::string& var) {
  const Ring& R = t.ring();
  const RingElement a = R.coerce(f.a);
  const RingElement b = R.coerce(f.b);
  MultiSeries::Terms terms;
  RingElement tn = R.one();
  for (int n = 0; n <= trunc; ++n, tn *= t) {
    RingElement c = R.from_rational(factorial_inverse(n)) * tn * (n % 2 ? a : b);
    terms.emplace(Exponent{n}, (n / 2) % 2 ? -c : c);
  }
  return MultiSeries(R, {var}, trunc, std::move(terms));
}

Ring sine_ring(const Ring& field, int trunc) { return Ring::laurent(field, "t", trunc, 1); }

MultiSeries sine_modified(const TrigForm& f, int trunc, const std::string& var) {
  if (f.a.ring() != f.b.ring()) throw RingMismatch("trigonometric form over two rings");
  Ring R = sine_ring(f.a.ring(), trunc);
  RingElement t = R.parameter_element();
  return trig_series(f, t, trunc, var).scaled(R.monomial(R.base().one(), -1));
}

MultiSeries sine_modified(const Rational& r, int trunc, const std::string& var) {
  return sine_modified(sine_form(r), trunc, var);
}

// ---------------------------------------------------------------------------

TateGroup::TateGroup(const FormalGroupLaw& F, const Ring& A, const RingElement& qhat)
    : law_(F.ring() == A ? F : F.base_change(A)), ring_(A), qhat_(A.coerce(qhat)) {
  if (!nilpotency_index(qhat_, 4 * law_.trunc() + 64))
    throw InvalidArgument("qhat image " + qhat_.to_string() + " is not nilpotent");
}

TatePoint TateGroup::identity() const { return TatePoint{ring_.zero(), 0}; }

TatePoint TateGroup::point(const RingElement& g, const Rational& a) const {
  TatePoint p{ring_.coerce(g), a};
  p.a.canonicalize();
  if (!contains(p))
    throw InvalidArgument("(" + p.g.to_string() + ", " + to_string(p.a) + ") is not a Tate point");
  return p;
}

bool TateGroup::contains(const TatePoint& p) const {
  return p.g.ring() == ring_ && p.a >= 0 && p.a < 1 &&
         nilpotency_index(p.g, 4 * law_.trunc() + 64).has_value();
}

bool TateGroup::equal(const TatePoint& p, const TatePoint& q) const {
  return p.a == q.a && p.g == q.g;
}

TatePoint tate_mul(const TateGroup& G, const TatePoint& p1, const TatePoint& p2) {
  if (p1.g.ring() != G.ring() || p2.g.ring() != G.ring())
    throw RingMismatch("Tate points over another ring than " + G.ring().describe());
  RingElement s = formal_sum(G.law(), p1.g, p2.g);
  Rational a = p1.a + p2.a;
  if (a < 1) return TatePoint{s, a};
  return TatePoint{formal_difference(G.law(), s, G.qhat()), a - 1};
}

TatePoint tate_inv(const TateGroup& G, const TatePoint& p) {
  if (p.g.ring() != G.ring())
    throw RingMismatch("Tate point over another ring than " + G.ring().describe());
  RingElement i = formal_inverse(G.law(), p.g);
  if (p.a == 0) return TatePoint{i, 0};
  return TatePoint{formal_sum(G.law(), G.qhat(), i), 1 - p.a};
}

TatePoint tate_pow(const TateGroup& G, const TatePoint& p, long n) {
  if (n < 0) return tate_pow(G, tate_inv(G, p), -n);
  TatePoint result = G.identity();
  TatePoint base = p;
  while (n > 0) {
    if (n & 1) result = tate_mul(G, result, base);
    n >>= 1;
    if (n) base = tate_mul(G, base, base);
  }
  return result;
}

std::optional<long> torsion_order(const TateGroup& G, const TatePoint& p, long bound) {
  TatePoint cur = p;
  for (long n = 1; n <= bound; ++n) {
    if (G.equal(cur, G.identity())) return n;
    cur = tate_mul(G, cur, p);
  }
  return std::nullopt;
}

RingElement random_ideal_element(const std::vector<RingElement>& basis, std::mt19937& rng) {
  if (basis.empty()) throw InvalidArgument("empty ideal basis");
  std::uniform_int_distribution<int> c(-4, 4);
  RingElement g = basis.front().ring().zero();
  for (const auto& b : basis) g += b.ring().from_integer(c(rng)) * b;
  return g;
}

ExactSequenceReport exact_sequence_check(const TateGroup& G, const std::vector<RingElement>& basis,
                                         int samples, unsigned seed) {
  const FormalGroupLaw& F = G.law();
  const RingElement& qh = G.qhat();
  std::vector<RingElement> ideal;
  for (const auto& b : basis) ideal.push_back(G.ring().coerce(b));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 6), shift(-6, 6);
  auto rational = [&] {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
  };
  auto fraction = [&] {
    Rational r = rational();
    return Rational(r - floor_of(r));
  };
  auto phi = [&](const RingElement& x, const Rational& a) {
    Rational f = floor_of(a);
    return TatePoint{formal_difference(F, x, n_series_at(F, to_long(f), qh)), a - f};
  };
  ExactSequenceReport report;
  auto fail = [&](bool& flag, int i, const std::string& what) {
    flag = false;
    report.failures.push_back("sample " + std::to_string(i) + ": " + what);
  };
  for (int i = 0; i < samples; ++i) {
    ++report.samples;
    RingElement x = random_ideal_element(ideal, rng), y = random_ideal_element(ideal, rng);
    Rational a = rational(), b = rational();
    if (!G.equal(phi(formal_sum(F, x, y), a + b), tate_mul(G, phi(x, a), phi(y, b))))
      fail(report.homomorphism, i, "phi is not additive");

    TatePoint p = G.point(random_ideal_element(ideal, rng), fraction());
    long m = shift(rng);
    if (!G.equal(phi(p.g, p.a), p) ||
        !G.equal(phi(formal_sum(F, p.g, n_series_at(F, m, qh)), p.a + m), p))
      fail(report.surjective, i, "no preimage found");

    long n = shift(rng);
    if (!G.equal(phi(n_series_at(F, n, qh), n), G.identity()))
      fail(report.kernel, i, "([" + std::to_string(n) + "](qhat), " + std::to_string(n) +
                                 ") is not in the kernel");

    TatePoint p2 = G.point(random_ideal_element(ideal, rng), fraction());
    RingElement d = formal_difference(F, tate_mul(G, p, p2).g, formal_sum(F, p.g, p2.g));
    if (!d.is_zero() && d != formal_inverse(F, qh))
      fail(report.projection, i, "projection defect " + d.to_string() + " is not a multiple of qhat");
  }
  return report;
}

}  // namespace fgc
