// SPDX-License-Identifier: Apache-2.0
#include "fgc/genus.hpp"

#include <algorithm>
#include <cstdlib>

#include "fgc/errors.hpp"

namespace fgc {

namespace {

MultiSeries renamed(const MultiSeries& f, const std::string& var) {
  return MultiSeries(f.ring(), {var}, f.trunc(), f.terms());
}

const std::string& only_var(const MultiSeries& f) {
  if (f.vars().size() != 1) throw InvalidArgument("expected a univariate series");
  return f.vars().front();
}

// Q(x) * (x / theta(x)) at x = exp_F(y), all at truncation T.
MultiSeries corrected(const FormalGroupLaw& F, const MultiSeries& theta, int T) {
  MultiSeries x_over_theta = ms_inverse(divided_by_variable(theta)).truncated(T);
  MultiSeries exp_y = fgl_exp(F, "y").truncated(T);
  MultiSeries todd = renamed(todd_series_of(F).series(), "y").truncated(T);
  return todd * ms_substitute(x_over_theta, {{only_var(theta), exp_y}});
}

}  // namespace

GenusSeries::GenusSeries(MultiSeries Q) : Q_(std::move(Q)) {
  only_var(Q_);
  if (!Q_.constant_term().is_one())
    throw InvalidArgument("a characteristic series needs Q(0) = 1, got " +
                          Q_.constant_term().to_string());
}

MultiSeries divided_by_variable(const MultiSeries& f) {
  const std::string& v = only_var(f);
  if (!f.constant_term().is_zero()) throw ConstantTermError("f(0) must vanish to divide by " + v);
  if (f.trunc() < 1) throw TruncationError("nothing left after dividing by " + v);
  MultiSeries::Terms t;
  for (const auto& [e, c] : f.terms())
    if (e[0] > 0) t.emplace(Exponent{e[0] - 1}, c);
  return MultiSeries(f.ring(), {v}, f.trunc() - 1, std::move(t));
}

RingElement genus_eval(const ChernData& X, const GenusSeries& Q) {
  return evaluate_series(X, Q.series());
}

RingElement evaluate_series(const ChernData& X, const MultiSeries& Q) {
  const Ring& R = Q.ring();
  const int T = Q.trunc();
  const std::string& v = only_var(Q);
  RingElement result = R.one();
  for (const auto& blk : X.blocks) {
    if (T < blk.top_power)
      throw TruncationError("genus series known to degree " + std::to_string(T) + ", need " +
                            std::to_string(blk.top_power));
    MultiSeries h = MultiSeries::variable(R, {"h"}, T, "h");
    MultiSeries prod = MultiSeries::constant(R, {"h"}, T, R.one());
    for (const auto& root : blk.roots) {
      if (root.weight == 0 || root.multiplicity == 0) continue;
      MultiSeries q = ms_substitute(Q, {{v, h.scaled(R.from_integer(root.weight))}});
      prod *= q.pow(root.multiplicity);
    }
    result *= prod.coefficient(blk.top_power) * R.from_integer(blk.degree);
  }
  return result;
}

GenusSeries todd_series_of(const FormalGroupLaw& F) {
  return GenusSeries(ms_inverse(divided_by_variable(fgl_exp(F))));
}

GenusSeries todd_series(int trunc) {
  return todd_series_of(FormalGroupLaw::multiplicative(Ring::rationals(), trunc + 1));
}

GenusSeries ahat_series(int trunc) {
  const Ring QQ = Ring::rationals();
  // sinh(x/2) / (x/2) = sum x^{2m} / (4^m (2m+1)!).
  MultiSeries::Terms t;
  Integer f = 1;
  for (int m = 0; 2 * m <= trunc; ++m) {
    if (m > 0) f *= (2 * m) * (2 * m + 1);
    Integer four_m = 1;
    four_m <<= 2 * m;
    t.emplace(Exponent{2 * m}, QQ.from_rational(Rational(Integer(1), four_m * f)));
  }
  return GenusSeries(ms_inverse(MultiSeries(QQ, {"x"}, trunc, std::move(t))));
}

Integer euler_characteristic(const ChernData& X) {
  const Ring QQ = Ring::rationals();
  Integer chi = 1;
  for (const auto& blk : X.blocks) {
    const int n = blk.top_power;
    MultiSeries h = MultiSeries::variable(QQ, {"h"}, n, "h");
    MultiSeries one = MultiSeries::constant(QQ, {"h"}, n, QQ.one());
    MultiSeries c = one;
    for (const auto& root : blk.roots)
      c *= (one + h.scaled(QQ.from_integer(root.weight))).pow(root.multiplicity);
    chi *= c.coefficient(n).rational().get_num() * blk.degree;
  }
  return chi;
}

RiemannRoch rr_transform(const ChernData& X, const FormalGroupLaw& F0, const MultiSeries& theta0) {
  only_var(theta0);
  if (!theta0.constant_term().is_zero()) throw ConstantTermError("theta(0) must vanish");
  if (!theta0.coefficient(1).is_one())
    throw NonStrictIsomorphism("theta'(0) = " + theta0.coefficient(1).to_string() +
                               "; renormalize to a strict isomorphism");
  const int T = std::min(F0.trunc(), theta0.trunc());
  const MultiSeries theta = theta0.truncated(T);
  FormalGroupLaw F = F0.truncated(T);
  if (F.ring() != theta.ring()) F = F.base_change(theta.ring());
  const FormalGroupLaw G = transport(F, theta).first;
  return RiemannRoch{genus_eval(X, todd_series_of(G)),
                     genus_eval(X, GenusSeries(corrected(F, theta, T - 1)))};
}

MultiSeries loop_characteristic(const EquivariantContext& ctx, int N, LoopNormalization norm) {
  const FormalGroupLaw& F = ctx.law();
  const int T = ctx.trunc() - 1;
  MultiSeries th = norm == LoopNormalization::raw ? theta_unnormalized(ctx, N) : theta(ctx, N).series;
  MultiSeries Q = corrected(F, th, T);
  if (norm == LoopNormalization::sigma) {
    if (ctx.flavor() != ContextFlavor::multiplicative)
      throw InvalidArgument("the sigma normalization belongs to the multiplicative law");
    // x / sigma_N(1 - x) = (x / Theta(x)) (1 - x)^N.
    const Ring& R = ctx.coeff();
    MultiSeries one = MultiSeries::constant(R, {"y"}, T, R.one());
    Q *= (one - fgl_exp(F, "y").truncated(T)).pow(N);
  }
  return Q;
}

GenusSeries loop_series(const EquivariantContext& ctx, int N, LoopNormalization norm) {
  if (norm == LoopNormalization::raw)
    throw InvalidArgument("the raw loop series has Q(0) != 1; use loop_characteristic");
  return GenusSeries(loop_characteristic(ctx, N, norm));
}

RingElement loop_genus(const ChernData& X, const EquivariantContext& ctx, int N,
                       LoopNormalization norm) {
  if (norm == LoopNormalization::sigma && !X.first_chern_class_vanishes())
    throw NonConvergent("the sigma-normalized loop genus needs c_1 = 0");
  return evaluate_series(X, loop_characteristic(ctx, N, norm));
}

GenusSeries additive_loop_series(int trunc, const Ring& field) {
  return GenusSeries(ms_inverse(divided_by_variable(theta_additive_closed(trunc + 1, field))));
}

RingElement additive_loop_genus(const ChernData& X, const Ring& field) {
  return genus_eval(X, additive_loop_series(std::max(X.dimension(), 1), field));
}

bool loop_vs_quotient_check(const ChernData& X, const EquivariantContext& ctx, int N) {
  RingElement lhs = loop_genus(X, ctx, N);
  const FormalGroupLaw G = transport(ctx.law(), theta(ctx, N).series).first;
  return lhs == genus_eval(X, todd_series_of(G));
}

RingElement chi_residue(const ChernData& X, const Rational& r) {
  if (r.get_den() == 1) throw PoleError("sin(pi r) vanishes at r = " + to_string(r));
  const TrigForm f = sine_form(-r);  // sin(u + pi r)
  const int d = X.dimension();
  int mass = 0;
  for (const auto& blk : X.blocks)
    for (const auto& root : blk.roots) mass += std::abs(root.multiplicity);
  const Ring R = Ring::laurent(f.a.ring(), "t", 2 * d + 2 * mass + 4, d + mass + 4);
  const RingElement t = R.parameter_element();
  RingElement result = R.one();
  for (const auto& blk : X.blocks) {
    const int n = blk.top_power;
    const std::vector<std::string> hz{"h", "z"};
    MultiSeries h = MultiSeries::variable(R, hz, 2 * n, "h");
    MultiSeries z = MultiSeries::variable(R, hz, 2 * n, "z");
    MultiSeries one = MultiSeries::constant(R, hz, 2 * n, R.one());
    // g(u) = t / sin(t u + pi r).
    MultiSeries g = ms_inverse(trig_series(f, t, 2 * n, "u")).scaled(t);
    MultiSeries chern = one;
    MultiSeries prod = one;
    for (const auto& root : blk.roots) {
      MultiSeries wh = h.scaled(R.from_integer(root.weight));
      chern *= (one + wh).pow(root.multiplicity);
      prod *= ms_substitute(g, {{"u", wh * z}}).pow(root.multiplicity);
    }
    // prod_j x_j z is the top Chern class times z^n.
    MultiSeries euler = (h * z).pow(n).scaled(chern.coefficient(Exponent{n, 0}));
    result *= (euler * prod).coefficient(Exponent{n, n}) * R.from_integer(blk.degree);
  }
  return result;
}

}  // namespace fgc
