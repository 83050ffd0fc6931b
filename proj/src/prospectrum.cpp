// SPDX-License-Identifier: Apache-2.0
#include "fgc/prospectrum.hpp"

#include <algorithm>

#include "fgc/errors.hpp"
#include "fgc/genus.hpp"
#include "fgc/tate.hpp"

namespace fgc {

namespace {

// The root series [scale]_F(root) of a block.
MultiSeries root_series(const ThomTower& T, const EqBlock& blk) {
  const EquivariantContext& ctx = T.context();
  MultiSeries x = MultiSeries::variable(ctx.coeff(), T.vars(), ctx.trunc(), blk.root);
  if (blk.scale == 1) return x;
  return ms_substitute(n_series(ctx.law(), blk.scale), {{"x", x}});
}

bool rooted(const EqBlock& blk) { return !blk.root.empty() && blk.scale != 0; }

// Whether every coefficient of a - b vanishes through q^order, failing loudly
// when the coefficients are not known that far.
bool agree_through(const MultiSeries& a, const MultiSeries& b, int order) {
  const MultiSeries d = a - b;
  for (const auto& [e, c] : d.terms()) {
    if (c.precision() < order)
      throw TruncationError("coefficients known only to q^" + std::to_string(c.precision()) +
                            ", raise the context q-order");
    for (const auto& [k, v] : c.series_terms())
      if (k <= order && !v.is_zero()) return false;
  }
  return true;
}

MultiSeries cut_at(const MultiSeries& f, int order) {
  MultiSeries::Terms t;
  const Ring& R = f.ring();
  for (const auto& [e, c] : f.terms()) t.emplace(e, c + R.series_element({}, order));
  return MultiSeries(R, f.vars(), f.trunc(), std::move(t));
}

}  // namespace

ThomTower::ThomTower(EquivariantContext ctx, EqBundle V,
                     std::optional<std::vector<std::string>> vars)
    : ctx_(std::move(ctx)), V_(std::move(V)), vars_(vars ? *vars : V_.roots()) {
  for (const auto& r : V_.roots())
    if (std::find(vars_.begin(), vars_.end(), r) == vars_.end())
      throw InvalidArgument("root " + r + " is not among the tower variables");
}

MultiSeries ThomTower::constant(const RingElement& c) const {
  return MultiSeries::constant(ctx_.coeff(), vars_, ctx_.trunc(), ctx_.coeff().coerce(c));
}

MultiSeries ThomTower::transition(int n) const {
  if (n < 1) throw InvalidArgument("transitions start at n = 1");
  return euler_class(ctx_, V_.twisted(n), vars_) * euler_class(ctx_, V_.twisted(-n), vars_);
}

MultiSeries ThomTower::unit_u(int n) const {
  if (n < 0) throw InvalidArgument("negative stage");
  if (!ctx_.localized()) throw NotAUnit("u_n needs a localized context");
  MultiSeries u = constant(ctx_.coeff().one());
  for (int k = 1; k <= n; ++k) u *= transition(k);
  return u;
}

TowerClass ThomTower::omega(int n, const MultiSeries& s) const { return {n, unit_u(n) * s}; }

TowerClass ThomTower::push(const TowerClass& c, int stage) const {
  if (stage < c.stage) throw InvalidArgument("classes only move up the tower");
  TowerClass out = c;
  for (int j = c.stage + 1; j <= stage; ++j) out.value *= transition(j);
  out.stage = stage;
  return out;
}

bool ThomTower::equivalent(const TowerClass& a, const TowerClass& b) const {
  const int m = std::max(a.stage, b.stage);
  return push(a, m).value == push(b, m).value;
}

MultiSeries relative_omega(const ThomTower& T, int N) {
  if (N < 0) throw InvalidArgument("negative cutoff");
  MultiSeries out = T.constant(T.context().coeff().one());
  for (const auto& blk : T.bundle().blocks) {
    if (!rooted(blk) || blk.multiplicity == 0) continue;
    if (blk.weight != 0) throw InvalidArgument("relative omega needs weight-0 blocks");
    MultiSeries x = root_series(T, blk);
    MultiSeries f = T.constant(T.context().coeff().one());
    for (long k = 1; k <= N; ++k) f *= theta_factor(T.context(), x, k) * theta_factor(T.context(), x, -k);
    out *= f.pow(blk.multiplicity);
  }
  return out;
}

Stabilization stabilize(const ThomTower& T, int q_order, StabilizeForm form) {
  const EquivariantContext& ctx = T.context();
  const Ring& R = ctx.coeff();
  if (q_order < 0) throw InvalidArgument("negative q-order");
  Stabilization out{0, T.constant(R.one()), T.constant(R.one()), false};

  if (ctx.flavor() == ContextFlavor::additive) {
    Ring Rt = t_polynomials();
    MultiSeries closed = MultiSeries::constant(Rt, T.vars(), ctx.trunc(), Rt.one());
    MultiSeries s = divided_by_variable(theta_additive_closed(ctx.trunc() + 1));
    for (const auto& blk : T.bundle().blocks) {
      if (!rooted(blk) || blk.multiplicity == 0) continue;
      MultiSeries x = MultiSeries::variable(Rt, T.vars(), ctx.trunc(), blk.root)
                          .scaled(Rt.from_integer(blk.scale));
      closed *= ms_substitute(s, {{"x", x}}).pow(blk.multiplicity);
    }
    out.N_stable = q_order;
    out.series = closed;
    out.closed_form = closed;
    out.matches_closed_form = true;
    return out;
  }
  if (ctx.flavor() != ContextFlavor::multiplicative || !ctx.localized())
    throw InvalidArgument("stabilize needs a localized G_a or G_m context");
  if (q_order > R.order())
    throw TruncationError("q-order " + std::to_string(q_order) + " exceeds the context order " +
                          std::to_string(R.order()));

  // L = prod (1 - x_j)^{m_j}; sigma_N(L_j) / x_j = Theta_N(x_j) / x_j * L_j^{-N}.
  MultiSeries one = T.constant(R.one());
  MultiSeries Lprod = one;
  for (const auto& blk : T.bundle().blocks)
    if (rooted(blk) && blk.multiplicity != 0) Lprod *= (one - root_series(T, blk)).pow(blk.multiplicity);
  if (form == StabilizeForm::raw && Lprod != one)
    throw NonConvergent("the raw partial products carry prod (1 - x_j)^{N m_j} = (" +
                        Lprod.to_string() + ")^N");
  MultiSeries Linv = ms_inverse(Lprod);

  std::vector<MultiSeries> S;
  for (int N = 0; N <= q_order + 1; ++N) S.push_back(relative_omega(T, N) * Linv.pow(N));
  int stable = q_order + 1;
  while (stable > 0 && agree_through(S[stable - 1], S[q_order], q_order)) --stable;
  // S_{q_order+1} must agree as well for the window to start at q_order.
  if (!agree_through(S[q_order + 1], S[q_order], q_order)) stable = q_order + 1;
  out.N_stable = stable;
  out.series = cut_at(S[stable], q_order);

  LSeries sig = sigma(R);
  MultiSeries sig_x = divided_by_variable(lseries_in_x(sig, "x", ctx.trunc() + 1));
  MultiSeries closed = one;
  for (const auto& blk : T.bundle().blocks)
    if (rooted(blk) && blk.multiplicity != 0)
      closed *= ms_substitute(sig_x, {{"x", root_series(T, blk)}}).pow(blk.multiplicity);
  out.closed_form = cut_at(closed, q_order);
  out.matches_closed_form = agree_through(out.series, closed, q_order);
  return out;
}

}  // namespace fgc
