// SPDX-License-Identifier: Apache-2.0
//
// One-dimensional commutative formal group laws F(x, y) over a coefficient
// ring, validated when constructed.
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "fgc/polyseries.hpp"

namespace fgc {

struct AxiomReport {
  bool unit = true;
  bool commutative = true;
  bool associative = true;
  std::string detail;  // first defect found, empty when all pass
  bool ok() const { return unit && commutative && associative; }
};

/// Checks F(x,0) = x, F(0,y) = y, F(x,y) = F(y,x) and associativity up to the
/// truncation of F (a series in the variables x, y).
AxiomReport check_axioms(const MultiSeries& law);

class FormalGroupLaw {
 public:
  static FormalGroupLaw additive(const Ring& ring, int trunc);
  /// x + y - xy.
  static FormalGroupLaw multiplicative(const Ring& ring, int trunc);
  /// l^{-1}(l(x) + l(y)) for a strict logarithm l over a Q-algebra.
  static FormalGroupLaw from_log(const MultiSeries& log);
  /// Validates `law`; throws AxiomFailure.
  static FormalGroupLaw from_series(const MultiSeries& law);

  const Ring& ring() const { return law_.ring(); }
  int trunc() const { return law_.trunc(); }
  const MultiSeries& law() const { return law_; }

  /// c when the law is exactly x + y + c xy (c = 0 for the additive law).
  std::optional<RingElement> bilinear_coefficient() const;

  /// The same law read over `ring` (no revalidation: ring maps preserve the
  /// axioms).
  FormalGroupLaw base_change(const Ring& ring) const;
  FormalGroupLaw truncated(int trunc) const;

  friend bool operator==(const FormalGroupLaw& a, const FormalGroupLaw& b) {
    return a.law_ == b.law_;
  }

 private:
  explicit FormalGroupLaw(MultiSeries law) : law_(std::move(law)) {}
  MultiSeries law_;
};

enum class LawKind { additive, multiplicative, from_log };

FormalGroupLaw make_fgl(LawKind kind, const Ring& ring, int trunc,
                        const std::optional<MultiSeries>& log = std::nullopt);

/// F(a, b) for series in a common context. The constant terms must vanish
/// unless F is a polynomial law.
MultiSeries formal_sum(const FormalGroupLaw& F, const MultiSeries& a, const MultiSeries& b);
/// F(a, b) for elements of a test ring. Exact when F is a polynomial law;
/// otherwise every product a^i b^j with i + j = trunc + 1 must vanish.
RingElement formal_sum(const FormalGroupLaw& F, const RingElement& a, const RingElement& b);

/// F(a, c) for a series a without constant term and a constant c. For a law
/// that is not a polynomial, c must be nilpotent with c^n = 0 and the law must
/// be known to degree a.trunc() + n - 1.
MultiSeries formal_sum(const FormalGroupLaw& F, const MultiSeries& a, const RingElement& c);

MultiSeries formal_inverse(const FormalGroupLaw& F, const MultiSeries& a);
RingElement formal_inverse(const FormalGroupLaw& F, const RingElement& a);

/// a -_F b.
RingElement formal_difference(const FormalGroupLaw& F, const RingElement& a, const RingElement& b);

/// The formal inverse iota(x) as a univariate series.
MultiSeries inverse_series(const FormalGroupLaw& F, const std::string& var = "x");

/// [k]_F(x) as a univariate series, by a binary addition chain.
MultiSeries n_series(const FormalGroupLaw& F, long k, const std::string& var = "x");
/// [k]_F(a) for a ring element.
RingElement n_series_at(const FormalGroupLaw& F, long k, const RingElement& a);

MultiSeries fgl_log(const FormalGroupLaw& F, const std::string& var = "x");
MultiSeries fgl_exp(const FormalGroupLaw& F, const std::string& var = "x");

struct Isomorphism {
  MultiSeries theta;
  FormalGroupLaw source;
  FormalGroupLaw target;
  bool strict() const { return theta.coefficient(1).is_one(); }
};

/// G(x, y) = theta(F(theta^{-1} x, theta^{-1} y)). If theta lives over a ring
/// other than F's, F is first base-changed to it.
std::pair<FormalGroupLaw, Isomorphism> transport(const FormalGroupLaw& F, const MultiSeries& theta);

/// Whether theta(F(x,y)) = G(theta x, theta y) up to truncation.
bool is_homomorphism(const MultiSeries& theta, const FormalGroupLaw& F, const FormalGroupLaw& G);

}  // namespace fgc
