// SPDX-License-Identifier: Apache-2.0
//
// The Thom tower of a bundle V: stage n models E_T(X^{-I_n V}) as a free
// rank-one module, the maps between stages multiply by Euler classes of the
// new eigenspaces, and the units u_n(V) assemble into the maps omega_n.
#pragma once

#include <string>
#include <vector>

#include "fgc/equivariant.hpp"

namespace fgc {

struct TowerClass {
  int stage = 0;
  MultiSeries value;
};

class ThomTower {
 public:
  /// Series live in `vars` (default: the roots of V).
  ThomTower(EquivariantContext ctx, EqBundle V,
            std::optional<std::vector<std::string>> vars = std::nullopt);

  const EquivariantContext& context() const { return ctx_; }
  const EqBundle& bundle() const { return V_; }
  const std::vector<std::string>& vars() const { return vars_; }

  MultiSeries constant(const RingElement& c) const;

  /// e_T(V (x) C(n)) e_T(V (x) C(-n)), n >= 1.
  MultiSeries transition(int n) const;
  /// prod_{0<|k|<=n} e_T(V (x) C(k)); NotAUnit outside a localized context.
  MultiSeries unit_u(int n) const;
  /// (n, u_n s).
  TowerClass omega(int n, const MultiSeries& s) const;
  /// The image of c at a later stage.
  TowerClass push(const TowerClass& c, int stage) const;
  /// Equality in the colimit, decided at the later of the two stages.
  bool equivalent(const TowerClass& a, const TowerClass& b) const;

 private:
  EquivariantContext ctx_;
  EqBundle V_;
  std::vector<std::string> vars_;
};

/// prod_j prod_{0<|k|<=N} (x_j +_F [k](qhat)) / [k](qhat) over the rooted
/// blocks of V, which must have weight 0.
MultiSeries relative_omega(const ThomTower& T, int N);

enum class StabilizeForm { sigma, raw };

struct Stabilization {
  int N_stable = 0;
  MultiSeries series;       // the stable partial product
  MultiSeries closed_form;  // prod sigma(L_j)/x_j, or prod sin(t x_j)/(t x_j) for G_a
  bool matches_closed_form = false;
};

/// Coefficientwise q-adic stabilization of the normalized partial products.
/// G_m: S_N = prod_j sigma_N(1 - x_j)/x_j, N_stable is the least N with
/// S_M = S_{q_order} mod q^{q_order+1} for N <= M <= q_order + 1. The raw form
/// keeps the factor prod (1 - x_j)^{N m_j} and throws NonConvergent unless
/// prod (1 - x_j)^{m_j} = 1. G_a: the closed form over Q[t] is exact at
/// every cutoff, and N_stable is reported as q_order.
Stabilization stabilize(const ThomTower& T, int q_order, StabilizeForm form = StabilizeForm::sigma);

}  // namespace fgc
