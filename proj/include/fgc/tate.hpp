// SPDX-License-Identifier: Apache-2.0
//
// The renormalized product Theta_F(x; qhat), the Weierstrass sigma product
// and its modified forms, the modified sine, and the Tate extension group.
#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fgc/equivariant.hpp"

namespace fgc {

struct ThetaSeries {
  FormalGroupLaw law;
  int N;
  MultiSeries series;  // univariate in x over the context coefficients
};

/// (x +_F [k](qhat)) / [k](qhat) for a series x in the context.
MultiSeries theta_factor(const EquivariantContext& ctx, const MultiSeries& x, long k);
/// x * prod_{0<|k|<=N} (x +_F [k](qhat)) / [k](qhat). Throws NotAUnit when
/// some [k](qhat) does not invert.
ThetaSeries theta(const EquivariantContext& ctx, int N, const std::string& var = "x");
/// The same product without the denominators.
MultiSeries theta_unnormalized(const EquivariantContext& ctx, int N, const std::string& var = "x");
/// Whether theta vanishes at [k](qhat) for 0 < |k| <= N.
bool theta_kernel_holds(const EquivariantContext& ctx, const ThetaSeries& th);

/// The ring Q[t] of the G_a closed forms, t standing for pi / qhat.
Ring t_polynomials(const Ring& field = Ring::rationals());
/// sin(t x) / t over K[t].
MultiSeries theta_additive_closed(int trunc, const Ring& field = Ring::rationals(),
                                  const std::string& var = "x");

/// A Laurent polynomial in L with coefficients in a Laurent ring in q. A
/// coefficient that is not stored is zero up to q-precision
/// `base_precision + slope * b` at L^b, or exactly zero when base_precision
/// is kExactPrecision.
class LSeries {
 public:
  LSeries(Ring qring, std::map<long, RingElement> coeffs, long base_precision = kExactPrecision,
          long slope = 0);

  const Ring& ring() const { return ring_; }
  const std::map<long, RingElement>& coefficients() const { return coeffs_; }
  long base_precision() const { return base_; }
  long slope() const { return slope_; }
  bool is_exact() const { return base_ >= kExactPrecision; }

  /// Precision of an absent coefficient at L^b.
  long absent_precision(long b) const;
  RingElement coefficient(long b) const;

  /// L -> q^s L.
  LSeries substitute_q_power(long s) const;
  /// c * L^e * this.
  LSeries times(const RingElement& c, long e) const;
  /// Product; at least one factor must be exact.
  friend LSeries operator*(const LSeries& a, const LSeries& b);
  friend LSeries operator-(const LSeries& a);

  /// Every coefficient known only up to q^p; needs slope 0.
  LSeries truncated(long p) const;
  /// Smallest precision among the coefficients at L-exponents in [lo, hi].
  long min_precision(long lo, long hi) const;

  /// Coefficientwise equality for L-exponents in [lo, hi], each compared up
  /// to the precision both sides know.
  bool agrees_with(const LSeries& other, long lo, long hi) const;

  std::string to_string() const;

 private:
  Ring ring_;
  std::map<long, RingElement> coeffs_;
  long base_;
  long slope_;
};

/// The default q ring for sigma: Laurent series over Q with a tail wide
/// enough for modified forms and q-shifts at this order.
Ring sigma_ring(int qorder);

/// (1 - L) prod_{0<k<=cutoff} (1 - q^k L)(1 - q^k / L) / (1 - q^k)^2 over
/// `qring`; the cutoff defaults to the q-order, beyond which every factor is
/// 1 at that truncation.
LSeries sigma(const Ring& qring, std::optional<int> cutoff = std::nullopt);
/// sigma[L, r] = q^{-f(f+1)/2} (-L)^f sigma(L, q) with f = floor(r).
LSeries sigma_modified(const Ring& qring, const Rational& r);

/// f(1 - L) for a univariate polynomial f.
LSeries lseries_at_one_minus(const MultiSeries& f);
/// sum_b c_b (1 - x)^b as a series in `var`; needs slope 0.
MultiSeries lseries_in_x(const LSeries& s, const std::string& var, int trunc);
/// L^{-N} Theta(1 - L), the sigma-normalized form of a G_m theta.
LSeries theta_in_L(const ThetaSeries& th);

/// a sin(u) + b cos(u).
struct TrigForm {
  RingElement a;
  RingElement b;
};

/// The smallest field holding sin(pi r) and cos(pi r); throws
/// UnrepresentableAngle unless the denominator of r divides 4 or 6.
Ring angle_field(const Rational& r);
RingElement sin_pi(const Rational& r);
RingElement cos_pi(const Rational& r);

/// sin(u - pi r) in angle addition form.
TrigForm sine_form(const Rational& r);
/// sin(u - pi r) given symbols s = sin(pi r) and c = cos(pi r).
TrigForm sine_form_symbolic(const RingElement& s, const RingElement& c);
/// u -> u + pi.
TrigForm half_turn(const TrigForm& f);

/// a sin(t x) + b cos(t x) as a series in `var` over t's ring.
MultiSeries trig_series(const TrigForm& f, const RingElement& t, int trunc,
                        const std::string& var = "x");
/// The Laurent ring K((t)) used by the modified sine at this truncation.
Ring sine_ring(const Ring& field, int trunc);
/// s[x, r] = sin(t x - pi r) / t over sine_ring(angle_field(r), trunc).
MultiSeries sine_modified(const Rational& r, int trunc, const std::string& var = "x");
/// The same for a caller-supplied form over a field K.
MultiSeries sine_modified(const TrigForm& f, int trunc, const std::string& var = "x");

struct TatePoint {
  RingElement g;
  Rational a;
};

/// T(F)(A): pairs (g, a) with g nilpotent in A and a in [0, 1).
class TateGroup {
 public:
  TateGroup(const FormalGroupLaw& F, const Ring& A, const RingElement& qhat);

  const FormalGroupLaw& law() const { return law_; }
  const Ring& ring() const { return ring_; }
  const RingElement& qhat() const { return qhat_; }

  TatePoint identity() const;
  /// Validates g and a; throws InvalidArgument.
  TatePoint point(const RingElement& g, const Rational& a) const;
  bool contains(const TatePoint& p) const;
  bool equal(const TatePoint& p, const TatePoint& q) const;

 private:
  FormalGroupLaw law_;
  Ring ring_;
  RingElement qhat_;
};

TatePoint tate_mul(const TateGroup& G, const TatePoint& p1, const TatePoint& p2);
TatePoint tate_inv(const TateGroup& G, const TatePoint& p);
TatePoint tate_pow(const TateGroup& G, const TatePoint& p, long n);
/// Least n <= bound with p^n the identity.
std::optional<long> torsion_order(const TateGroup& G, const TatePoint& p, long bound);

/// c_1 b_1 + ... + c_k b_k with small random integers c_i.
RingElement random_ideal_element(const std::vector<RingElement>& basis, std::mt19937& rng);

struct ExactSequenceReport {
  bool homomorphism = true;  // (x, a) -> (x -_F [floor a](qhat), frac a)
  bool surjective = true;
  bool kernel = true;        // ([n](qhat), n) -> identity
  bool projection = true;    // (g, a) -> g modulo the multiples of qhat
  int samples = 0;
  std::vector<std::string> failures;
  bool ok() const { return homomorphism && surjective && kernel && projection; }
};

/// Checks the exact sequence on random samples drawn from the ideal spanned
/// by `basis`.
ExactSequenceReport exact_sequence_check(const TateGroup& G, const std::vector<RingElement>& basis,
                                         int samples, unsigned seed = 1);

}  // namespace fgc
