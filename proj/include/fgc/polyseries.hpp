// SPDX-License-Identifier: Apache-2.0
//
// Sparse multivariate series over a coefficient ring, truncated at a total
// degree. The series parameter of the coefficient ring (q or q-hat) is not a
// variable here and has its own, independent order.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "fgc/coefficients.hpp"

namespace fgc {

using Exponent = std::vector<int>;

class MultiSeries {
 public:
  using Terms = std::map<Exponent, RingElement>;

  /// The zero series.
  MultiSeries(Ring ring, std::vector<std::string> vars, int trunc);
  MultiSeries(Ring ring, std::vector<std::string> vars, int trunc, Terms terms);

  static MultiSeries constant(Ring ring, std::vector<std::string> vars, int trunc,
                              const RingElement& c);
  static MultiSeries variable(Ring ring, std::vector<std::string> vars, int trunc,
                              const std::string& name);
  /// Univariate series sum c_k x^k from a coefficient list starting at k = 0.
  static MultiSeries univariate(Ring ring, const std::string& var, int trunc,
                                const std::vector<RingElement>& coeffs);

  const Ring& ring() const { return ring_; }
  const std::vector<std::string>& vars() const { return vars_; }
  int trunc() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  std::size_t var_index(const std::string& name) const;

  bool is_zero() const;
  bool same_context(const MultiSeries& other) const;
  /// Lowest total degree of a nonzero term; trunc + 1 for zero.
  int valuation() const;
  /// Highest total degree of a stored term; -1 for zero.
  int max_degree() const;
  /// Whether the top degree is vacant, so the stored terms are read as an
  /// exact polynomial.
  bool is_polynomial() const { return max_degree() < trunc_; }

  RingElement coefficient(const Exponent& e) const;
  RingElement constant_term() const;
  /// Coefficient of x^k of a univariate series.
  RingElement coefficient(int k) const;

  /// Drops terms above `trunc`; `trunc` may not exceed the current bound
  /// unless the series is a polynomial.
  MultiSeries truncated(int trunc) const;
  /// Same terms over a ring the coefficients coerce into.
  MultiSeries change_ring(const Ring& ring) const;
  /// Same terms, variables renamed or re-embedded into a larger variable list.
  MultiSeries embed(const std::vector<std::string>& vars) const;

  MultiSeries pow(int n) const;
  MultiSeries scaled(const RingElement& c) const;

  std::string to_string() const;

  friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator-(const MultiSeries& a);
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator*(const RingElement& c, const MultiSeries& a) { return a.scaled(c); }
  MultiSeries& operator+=(const MultiSeries& b) { return *this = *this + b; }
  MultiSeries& operator-=(const MultiSeries& b) { return *this = *this - b; }
  MultiSeries& operator*=(const MultiSeries& b) { return *this = *this * b; }
  friend bool operator==(const MultiSeries& a, const MultiSeries& b);
  friend bool operator!=(const MultiSeries& a, const MultiSeries& b) { return !(a == b); }

 private:
  void normalize();

  Ring ring_;
  std::vector<std::string> vars_;
  int trunc_;
  Terms terms_;
};

MultiSeries ms_mul(const MultiSeries& a, const MultiSeries& b);

/// Replaces variables of `f` by series from one target context. Variables of
/// `f` without a binding must exist in the target and are kept.
MultiSeries ms_substitute(const MultiSeries& f, const std::map<std::string, MultiSeries>& bindings);

/// Compositional inverse of a univariate series with f(0) = 0 and unit f'(0).
MultiSeries ms_reversion(const MultiSeries& f);

RingElement ms_coefficient(const MultiSeries& f, const Exponent& e);

/// Multiplicative inverse; the constant term must be a unit.
MultiSeries ms_inverse(const MultiSeries& f);

/// Partial derivative; exact only up to total degree trunc - 1, which becomes
/// the truncation of the result.
MultiSeries ms_derivative(const MultiSeries& f, const std::string& var);
/// Antiderivative with zero constant; needs a Q-algebra. The result has
/// truncation trunc + 1.
MultiSeries ms_integral(const MultiSeries& f, const std::string& var);

/// f(point) for a univariate f. Allowed when f is a polynomial or when
/// point^(trunc+1) is exactly zero.
RingElement ms_evaluate(const MultiSeries& f, const RingElement& point);

}  // namespace fgc
