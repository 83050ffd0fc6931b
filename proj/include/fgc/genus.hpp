// SPDX-License-Identifier: Apache-2.0
//
// Multiplicative genera of Chern-root data: F-genera, the Riemann-Roch
// transformation, the renormalized loop-space genus and its closed forms, and
// the residue computation of the Euler characteristic.
#pragma once

#include <string>
#include <utility>

#include "fgc/tate.hpp"

namespace fgc {

/// A univariate characteristic series Q with Q(0) = 1.
class GenusSeries {
 public:
  explicit GenusSeries(MultiSeries Q);
  const MultiSeries& series() const { return Q_; }
  const Ring& ring() const { return Q_.ring(); }
  int trunc() const { return Q_.trunc(); }

 private:
  MultiSeries Q_;
};

/// f(x) / x for a univariate f with f(0) = 0; the truncation drops by one.
MultiSeries divided_by_variable(const MultiSeries& f);

/// prod over blocks of degree_i * [h^{n_i}] prod_roots Q(w h)^m.
RingElement genus_eval(const ChernData& X, const GenusSeries& Q);

/// The same pairing for any univariate series, Q(0) = 1 or not.
RingElement evaluate_series(const ChernData& X, const MultiSeries& Q);

/// x / exp_F(x), truncated one below F.
GenusSeries todd_series_of(const FormalGroupLaw& F);
/// x / (1 - e^{-x}).
GenusSeries todd_series(int trunc);
/// (x/2) / sinh(x/2).
GenusSeries ahat_series(int trunc);

/// The top Chern number c_d[X].
Integer euler_characteristic(const ChernData& X);

struct RiemannRoch {
  RingElement lhs;  // genus under the transported law
  RingElement rhs;  // genus with Q_F(y) * (x / theta(x)) at x = exp_F(y)
  bool holds() const { return lhs == rhs; }
};

/// Both sides of Riemann-Roch for a strict isomorphism theta out of F.
/// Throws NonStrictIsomorphism.
RiemannRoch rr_transform(const ChernData& X, const FormalGroupLaw& F, const MultiSeries& theta);

enum class LoopNormalization {
  renormalized,  // x / Theta_F(x; N)
  raw,           // x / (x prod (x +_F [k](qhat))), no denominators
  sigma,         // G_m only: x / sigma_N(1 - x), needs c_1 = 0
};

/// Q_F(y) * (x / Theta(x)) at x = exp_F(y), truncated one below the context.
/// The raw form has constant term 1 / prod [k](qhat).
MultiSeries loop_characteristic(const EquivariantContext& ctx, int N,
                                LoopNormalization norm = LoopNormalization::renormalized);
/// loop_characteristic for the normalizations with Q(0) = 1.
GenusSeries loop_series(const EquivariantContext& ctx, int N,
                        LoopNormalization norm = LoopNormalization::renormalized);
/// The equivariant F-genus of the free loop space at cutoff N. The sigma
/// normalization throws NonConvergent unless c_1(X) = 0.
RingElement loop_genus(const ChernData& X, const EquivariantContext& ctx, int N,
                       LoopNormalization norm = LoopNormalization::renormalized);

/// t y / sin(t y) over K[t], the closed G_a loop series.
GenusSeries additive_loop_series(int trunc, const Ring& field = Ring::rationals());
RingElement additive_loop_genus(const ChernData& X, const Ring& field = Ring::rationals());

/// Whether the loop genus equals the genus under transport(F, Theta_F).
bool loop_vs_quotient_check(const ChernData& X, const EquivariantContext& ctx, int N);

/// Coefficient of z^d in p^X[prod_j t x_j z / sin(t x_j z + pi r)] over the
/// Laurent ring K((t)), evaluated per block through the top Chern class.
/// Throws PoleError for integer r.
RingElement chi_residue(const ChernData& X, const Rational& r);

}  // namespace fgc
