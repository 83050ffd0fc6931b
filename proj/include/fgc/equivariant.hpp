// SPDX-License-Identifier: Apache-2.0
//
// A model of the Borel extension of a theory with formal group law F over a
// space with trivial circle action: coefficients in a q-hat power series ring
// or its suitable localization, equivariant Euler classes of weighted
// bundles, and the normal bundle of X inside its free loop space.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgc/chern.hpp"
#include "fgc/fgl.hpp"

namespace fgc {

enum class ContextFlavor { additive, multiplicative, custom };

class EquivariantContext {
 public:
  /// G_a. Localized: Laurent series in qhat over Q; otherwise Q[[qhat]].
  static EquivariantContext additive(int trunc, int qorder, bool localized, int bound);
  /// G_m. Localized: Laurent series in q over Q with qhat = 1 - q; otherwise
  /// Q[[qhat]].
  static EquivariantContext multiplicative(int trunc, int qorder, bool localized, int bound);
  /// Any law over `coeff` with a designated qhat. When `localized`, [k](qhat)
  /// must be a unit for 0 < |k| <= bound.
  static EquivariantContext custom(const FormalGroupLaw& law, const Ring& coeff,
                                   const RingElement& qhat, bool localized, int bound);

  ContextFlavor flavor() const { return flavor_; }
  /// The law over the coefficient ring.
  const FormalGroupLaw& law() const { return law_; }
  const Ring& coeff() const { return coeff_; }
  const RingElement& qhat() const { return qhat_; }
  bool localized() const { return localized_; }
  int bound() const { return bound_; }
  int trunc() const { return law_.trunc(); }

  /// [k]_F(qhat).
  RingElement k_qhat(long k) const;

 private:
  EquivariantContext(ContextFlavor flavor, FormalGroupLaw law, Ring coeff, RingElement qhat,
                     bool localized, int bound);

  ContextFlavor flavor_;
  FormalGroupLaw law_;
  Ring coeff_;
  RingElement qhat_;
  bool localized_;
  int bound_;
};

/// A summand L^{[scale]} (x) C(weight) repeated `multiplicity` times, where L
/// has Euler class `root`. An empty root (or scale 0) is the trivial bundle.
/// Negative multiplicities describe virtual bundles.
struct EqBlock {
  std::string root;
  long scale = 1;
  long weight = 0;
  int multiplicity = 1;
};

struct EqBundle {
  std::vector<EqBlock> blocks;
  int rank() const;
  /// Distinct nonempty root names, in order of first appearance.
  std::vector<std::string> roots() const;
  EqBundle direct_sum(const EqBundle& other) const;
  /// Every block tensored with C(k).
  EqBundle twisted(long k) const;
};

/// prod ([scale]_F(root) +_F [weight]_F(qhat))^multiplicity as a series in
/// `vars` (default: the bundle's roots) over the context's coefficients.
MultiSeries euler_class(const EquivariantContext& ctx, const EqBundle& b,
                        std::optional<std::vector<std::string>> vars = std::nullopt);

/// True when no block is fixed by the action (weight 0 with a root or a
/// nonzero trivial summand) and the Euler class inverts in the truncated ring.
bool unit_check(const EquivariantContext& ctx, const EqBundle& b);

/// nu = sum over 0 < |k| <= N of TX (x) C(k), with the Chern roots of X.
EqBundle loop_normal_bundle(const ChernData& X, int N);

}  // namespace fgc
