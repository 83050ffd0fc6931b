// SPDX-License-Identifier: Apache-2.0
//
// Exact coefficient rings: (localized) integers, rationals, quadratic fields,
// integers mod m, truncated power/Laurent series in one distinguished
// parameter, and finitely presented polynomial rings over any of these.
//
// Ring descriptors are interned: two `Ring` handles compare equal exactly when
// they describe the same ring, and comparison is a pointer compare.
#pragma once

#include <gmpxx.h>

#include <climits>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fgc {

using Integer = mpz_class;
using Rational = mpq_class;

/// Sentinel precision of a series known exactly.
inline constexpr long kExactPrecision = LONG_MAX / 4;

enum class RingKind {
  integers,     // Z, or Z[1/p, ...] with a finite set of inverted primes
  rationals,    // Q
  quadratic,    // Q(sqrt(d)); d = -1 gives the Gaussian rationals
  integers_mod, // Z/m
  power_series, // B[[q]] / q^(order+1)
  laurent,      // B((q)), exponents in [-tail, order]
  polynomial,   // B[g_1, ..., g_n] / (monic relations, one per generator)
};

class RingElement;
struct Generator;

namespace detail {
struct RingData;
}

class Ring {
 public:
  /// The rationals.
  Ring();

  static Ring integers(std::vector<unsigned long> inverted_primes = {});
  static Ring rationals();
  static Ring gaussian_rationals();
  static Ring quadratic(long d);
  static Ring integers_mod(const Integer& modulus);
  static Ring power_series(const Ring& base, const std::string& parameter, int order);
  static Ring laurent(const Ring& base, const std::string& parameter, int order, int tail);
  static Ring polynomial(const Ring& base, const std::vector<Generator>& generators);

  /// Parses a canonical descriptor such as `laurent(QQ,q,6,2)` or
  /// `poly(ZZ,zeta:zeta^2+zeta+1)`.
  static Ring parse(const std::string& descriptor);

  RingKind kind() const;
  const std::string& describe() const;

  bool is_scalar() const;
  bool is_series() const;
  bool is_q_algebra() const;
  /// Whether "zero up to truncation" is a genuine zero (false for Laurent).
  bool truncation_is_ideal() const;

  // Kind-specific accessors; each throws InvalidArgument for the wrong kind.
  const Ring& base() const;
  const std::string& parameter() const;
  int order() const;
  int tail() const;
  const std::vector<unsigned long>& inverted_primes() const;
  long quadratic_d() const;
  const Integer& modulus() const;
  const std::vector<Generator>& generators() const;
  std::size_t generator_index(const std::string& name) const;

  RingElement zero() const;
  RingElement one() const;
  RingElement from_integer(long value) const;
  RingElement from_integer(const Integer& value) const;
  /// Throws RingMismatch if the value is not representable (e.g. 1/2 in Z).
  RingElement from_rational(const Rational& value) const;
  /// The square root of d in a quadratic field.
  RingElement sqrt_d() const;
  /// The series parameter q.
  RingElement parameter_element() const;
  /// coeff * q^exponent; coeff must coerce into the base.
  RingElement monomial(const RingElement& coeff, long exponent) const;
  RingElement series_element(std::vector<std::pair<long, RingElement>> terms,
                             long precision = kExactPrecision) const;
  RingElement generator(std::size_t index) const;
  RingElement generator(const std::string& name) const;
  RingElement polynomial_element(
      std::vector<std::pair<std::vector<int>, RingElement>> terms) const;

  /// Image of `x` under the canonical map into this ring.
  RingElement coerce(const RingElement& x) const;
  bool can_coerce(const RingElement& x) const;

  RingElement parse_element(const std::string& text) const;

  /// This ring with the base integers localized at the primes dividing
  /// `element`, which must be an integer constant.
  Ring localized_at(const RingElement& element) const;

  friend bool operator==(const Ring& a, const Ring& b) { return a.data_ == b.data_; }
  friend bool operator!=(const Ring& a, const Ring& b) { return a.data_ != b.data_; }

 private:
  explicit Ring(const detail::RingData* data) : data_(data) {}
  friend struct detail::RingData;
  friend class RingElement;
  const detail::RingData* data_;
};

namespace detail {
struct QuadraticValue {
  Rational a;
  Rational b;
};
struct SeriesValue {
  std::vector<std::pair<long, RingElement>> terms;  // sorted, nonzero
  long precision = kExactPrecision;
};
struct PolynomialValue {
  std::vector<std::pair<std::vector<int>, RingElement>> terms;  // sorted, nonzero, reduced
};
}  // namespace detail

class RingElement {
 public:
  /// Zero of the rationals.
  RingElement();

  const Ring& ring() const { return ring_; }

  bool is_zero() const;
  bool is_one() const;
  /// Zero, and not merely zero up to a Laurent precision bound.
  bool is_exact_zero() const;
  bool is_unit() const;

  /// Value of an integer/rational/mod-m element, or the rational part of a
  /// quadratic one.
  const Rational& rational() const;
  /// The sqrt(d) coefficient of a quadratic element.
  const Rational& irrational() const;

  // Series access.
  long valuation() const;  // LONG_MAX for zero
  long precision() const;
  RingElement coefficient(long exponent) const;
  const std::vector<std::pair<long, RingElement>>& series_terms() const;

  // Polynomial-ring access.
  const std::vector<std::pair<std::vector<int>, RingElement>>& polynomial_terms() const;
  RingElement coefficient(const std::vector<int>& exponent) const;

  /// Coefficient of q^0 / of the empty monomial; the element itself for scalars.
  RingElement constant_coefficient() const;

  RingElement pow(long n) const;
  RingElement inverse() const;
  std::optional<RingElement> try_inverse() const;

  std::string to_string() const;

  friend RingElement operator+(const RingElement& a, const RingElement& b);
  friend RingElement operator-(const RingElement& a, const RingElement& b);
  friend RingElement operator*(const RingElement& a, const RingElement& b);
  friend RingElement operator-(const RingElement& a);
  RingElement& operator+=(const RingElement& b) { return *this = *this + b; }
  RingElement& operator-=(const RingElement& b) { return *this = *this - b; }
  RingElement& operator*=(const RingElement& b) { return *this = *this * b; }
  friend bool operator==(const RingElement& a, const RingElement& b);
  friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

 private:
  friend class Ring;
  friend struct detail::RingData;
  using Payload = std::variant<Rational, detail::QuadraticValue, detail::SeriesValue,
                               detail::PolynomialValue>;
  RingElement(Ring ring, Payload payload) : ring_(ring), payload_(std::move(payload)) {}

  Ring ring_;
  Payload payload_;
};

struct Generator {
  std::string name;
  /// c_0, ..., c_{d-1} of the monic relation g^d + c_{d-1} g^{d-1} + ... + c_0;
  /// empty for a free generator.
  std::vector<RingElement> relation;
};

enum class ArithOp { add, sub, mul, neg };

/// Exact ring arithmetic; `b` is ignored for `neg`.
RingElement ring_arith(ArithOp op, const RingElement& a, const RingElement& b);
/// Throws NotAUnit when `a` has no inverse.
RingElement invert_unit(const RingElement& a);
/// Least n <= bound with a^n exactly zero.
std::optional<int> nilpotency_index(const RingElement& a, int bound);

std::string to_string(const Rational& r);
Rational floor_of(const Rational& r);

}  // namespace fgc
