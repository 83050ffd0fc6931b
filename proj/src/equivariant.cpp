// SPDX-License-Identifier: Apache-2.0
#include "fgc/equivariant.hpp"

#include <algorithm>

#include "fgc/errors.hpp"

namespace fgc {

namespace {

// Room below q^0 for products of inverted [k](qhat) and Theta coefficients.
int tail_for(int trunc, int bound) { return 4 * bound * (bound + 1) + 2 * trunc + 8; }

}  // namespace

EquivariantContext::EquivariantContext(ContextFlavor flavor, FormalGroupLaw law, Ring coeff,
                                       RingElement qhat, bool localized, int bound)
    : flavor_(flavor),
      law_(std::move(law)),
      coeff_(coeff),
      qhat_(std::move(qhat)),
      localized_(localized),
      bound_(bound) {
  if (bound_ < 0) throw InvalidArgument("negative unit bound");
  if (localized_)
    for (long k = -bound_; k <= bound_; ++k) {
      if (k == 0) continue;
      RingElement e = k_qhat(k);
      if (!e.try_inverse())
        throw NotAUnit("[" + std::to_string(k) + "](qhat) = " + e.to_string() +
                       " is not a unit of " + coeff_.describe());
    }
}

EquivariantContext EquivariantContext::additive(int trunc, int qorder, bool localized, int bound) {
  Ring coeff = localized
                   ? Ring::laurent(Ring::rationals(), "qhat", qorder, tail_for(trunc, bound))
                   : Ring::power_series(Ring::rationals(), "qhat", qorder);
  return EquivariantContext(ContextFlavor::additive, FormalGroupLaw::additive(coeff, trunc), coeff,
                            coeff.parameter_element(), localized, bound);
}

EquivariantContext EquivariantContext::multiplicative(int trunc, int qorder, bool localized,
                                                      int bound) {
  if (localized) {
    Ring coeff = Ring::laurent(Ring::rationals(), "q", qorder, tail_for(trunc, bound));
    return EquivariantContext(ContextFlavor::multiplicative,
                              FormalGroupLaw::multiplicative(coeff, trunc), coeff,
                              coeff.one() - coeff.parameter_element(), true, bound);
  }
  Ring coeff = Ring::power_series(Ring::rationals(), "qhat", qorder);
  return EquivariantContext(ContextFlavor::multiplicative,
                            FormalGroupLaw::multiplicative(coeff, trunc), coeff,
                            coeff.parameter_element(), false, bound);
}

EquivariantContext EquivariantContext::custom(const FormalGroupLaw& law, const Ring& coeff,
                                              const RingElement& qhat, bool localized, int bound) {
  FormalGroupLaw F = law.ring() == coeff ? law : law.base_change(coeff);
  return EquivariantContext(ContextFlavor::custom, F, coeff, coeff.coerce(qhat), localized, bound);
}

RingElement EquivariantContext::k_qhat(long k) const { return n_series_at(law_, k, qhat_); }

int EqBundle::rank() const {
  int r = 0;
  for (const auto& b : blocks) r += b.multiplicity;
  return r;
}

std::vector<std::string> EqBundle::roots() const {
  std::vector<std::string> out;
  for (const auto& b : blocks)
    if (!b.root.empty() && b.scale != 0 &&
        std::find(out.begin(), out.end(), b.root) == out.end())
      out.push_back(b.root);
  return out;
}

EqBundle EqBundle::direct_sum(const EqBundle& other) const {
  EqBundle out = *this;
  out.blocks.insert(out.blocks.end(), other.blocks.begin(), other.blocks.end());
  return out;
}

EqBundle EqBundle::twisted(long k) const {
  EqBundle out = *this;
  for (auto& b : out.blocks) b.weight += k;
  return out;
}

MultiSeries euler_class(const EquivariantContext& ctx, const EqBundle& b,
                        std::optional<std::vector<std::string>> vars) {
  const std::vector<std::string> v = vars ? *vars : b.roots();
  const Ring& R = ctx.coeff();
  const int T = ctx.trunc();
  const FormalGroupLaw& F = ctx.law();
  MultiSeries result = MultiSeries::constant(R, v, T, R.one());
  for (const auto& blk : b.blocks) {
    if (blk.multiplicity == 0) continue;
    MultiSeries factor(R, v, T);
    const bool trivial = blk.root.empty() || blk.scale == 0;
    if (trivial) {
      factor = MultiSeries::constant(R, v, T, ctx.k_qhat(blk.weight));
    } else {
      if (std::find(v.begin(), v.end(), blk.root) == v.end())
        throw InvalidArgument("root " + blk.root + " is not among the variables");
      MultiSeries root = MultiSeries::variable(R, v, T, blk.root);
      if (blk.scale != 1) root = ms_substitute(n_series(F, blk.scale), {{"x", root}});
      factor = blk.weight == 0 ? root : formal_sum(F, root, ctx.k_qhat(blk.weight));
    }
    result = result * factor.pow(blk.multiplicity);
  }
  return result;
}

bool unit_check(const EquivariantContext& ctx, const EqBundle& b) {
  if (!ctx.localized()) return false;
  for (const auto& blk : b.blocks)
    if (blk.weight == 0 && blk.multiplicity != 0) return false;
  try {
    ms_inverse(euler_class(ctx, b));
    return true;
  } catch (const NotAUnit&) {
    return false;
  }
}

EqBundle loop_normal_bundle(const ChernData& X, int N) {
  if (N < 1) throw InvalidArgument("loop normal bundle needs N >= 1");
  EqBundle nu;
  const auto vars = X.variables();
  for (std::size_t i = 0; i < X.blocks.size(); ++i)
    for (const auto& r : X.blocks[i].roots)
      for (long k = -N; k <= N; ++k) {
        if (k == 0) continue;
        nu.blocks.push_back(EqBlock{r.weight == 0 ? "" : vars[i], r.weight, k, r.multiplicity});
      }
  return nu;
}

}  // namespace fgc
