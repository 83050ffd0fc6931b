// SPDX-License-Identifier: Apache-2.0
//
// Lubin's quotient of a formal group law by a finite subgroup of points.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgc/fgl.hpp"

namespace fgc {

/// A finite set of points of F over a test ring; must contain 0.
struct SubgroupPoints {
  Ring ambient;
  std::vector<RingElement> points;
};

struct SubgroupCheck {
  bool ok = true;
  /// (a, b) with a +_F b outside H; for a missing inverse, (a, a).
  std::optional<std::pair<RingElement, RingElement>> witness;
  std::string reason;
};

SubgroupCheck subgroup_check(const FormalGroupLaw& F, const SubgroupPoints& H);

/// f_H(x) = prod_{h in H} (x +_F h), a univariate series in x over the ambient ring.
MultiSeries lubin_f(const FormalGroupLaw& F, const SubgroupPoints& H);

struct LubinG {
  MultiSeries g;        // strict: g'(0) = 1
  RingElement leading;  // f_H'(0) = prod_{h != 0} h
};

/// g_H = f_H / f_H'(0). The ambient ring is localized at `localize_at` (an
/// integer constant) only when the caller asks for it; otherwise a non-unit
/// f_H'(0) raises NotAUnit.
LubinG lubin_g(const FormalGroupLaw& F, const SubgroupPoints& H,
               const std::optional<RingElement>& localize_at = std::nullopt);

struct QuotientLaw {
  FormalGroupLaw law;  // F/H over the (localized) ambient ring
  MultiSeries f;       // f_H over the same ring
};

/// F/H = t o G o (t^-1 x t^-1) with G the transport of F along g_H and
/// t(x) = f_H'(0) x.
QuotientLaw quotient_law(const FormalGroupLaw& F, const SubgroupPoints& H,
                         const std::optional<RingElement>& localize_at = std::nullopt);

/// Whether F/H(f(x), f(y)) = f(F(x, y)) up to truncation.
bool quotient_identity_holds(const FormalGroupLaw& F, const QuotientLaw& q);

}  // namespace fgc
