// SPDX-License-Identifier: Apache-2.0
#include "fgc/quotient.hpp"

#include "fgc/errors.hpp"

namespace fgc {

namespace {

bool member(const std::vector<RingElement>& pts, const RingElement& a) {
  for (const auto& p : pts)
    if ((p - a).is_exact_zero()) return true;
  return false;
}

std::vector<RingElement> ambient_points(const SubgroupPoints& H) {
  std::vector<RingElement> pts;
  for (const auto& p : H.points) pts.push_back(H.ambient.coerce(p));
  return pts;
}

MultiSeries translate(const FormalGroupLaw& F, const Ring& A, const RingElement& h, int trunc) {
  return formal_sum(F, MultiSeries::variable(A, {"x"}, trunc, "x"), h);
}

int usable_trunc(const FormalGroupLaw& F, const std::vector<RingElement>& pts) {
  if (F.law().is_polynomial()) return F.trunc();
  int t = F.trunc();
  for (const auto& h : pts) {
    auto n = nilpotency_index(h, F.trunc() + 1);
    if (!n) throw ConstantTermError("point " + h.to_string() + " is not nilpotent");
    t = std::min(t, F.trunc() - (*n - 1));
  }
  if (t < 1) throw TruncationError("law truncation too small for these points");
  return t;
}

}  // namespace

SubgroupCheck subgroup_check(const FormalGroupLaw& F, const SubgroupPoints& H) {
  auto pts = ambient_points(H);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if ((pts[i] - pts[j]).is_exact_zero())
        throw InvalidArgument("repeated point " + pts[i].to_string());
  SubgroupCheck r;
  if (!member(pts, H.ambient.zero())) {
    r.ok = false;
    r.reason = "0 is not in H";
    return r;
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j) {
      RingElement s = formal_sum(F, pts[i], pts[j]);
      if (!member(pts, s)) {
        r.ok = false;
        r.witness = std::make_pair(pts[i], pts[j]);
        r.reason = pts[i].to_string() + " +_F " + pts[j].to_string() + " = " + s.to_string() +
                   " is not in H";
        return r;
      }
    }
  for (const auto& a : pts) {
    RingElement inv = formal_inverse(F, a);
    if (!member(pts, inv)) {
      r.ok = false;
      r.witness = std::make_pair(a, a);
      r.reason = "inverse of " + a.to_string() + " is not in H";
      return r;
    }
  }
  return r;
}

MultiSeries lubin_f(const FormalGroupLaw& F, const SubgroupPoints& H) {
  SubgroupCheck c = subgroup_check(F, H);
  if (!c.ok) throw InvalidArgument("not a subgroup: " + c.reason);
  const Ring& A = H.ambient;
  auto pts = ambient_points(H);
  const int T = usable_trunc(F, pts);
  MultiSeries f = MultiSeries::constant(A, {"x"}, T, A.one());
  for (const auto& h : pts) f = f * translate(F, A, h, T);
  return f;
}

LubinG lubin_g(const FormalGroupLaw& F, const SubgroupPoints& H,
               const std::optional<RingElement>& localize_at) {
  MultiSeries f = lubin_f(F, H);
  if (localize_at) {
    Ring local = H.ambient.localized_at(*localize_at);
    f = f.change_ring(local);
  }
  RingElement leading = f.coefficient(1);
  auto inv = leading.try_inverse();
  if (!inv)
    throw NotAUnit("f_H'(0) = " + leading.to_string() + " is not a unit of " +
                   f.ring().describe());
  return {f.scaled(*inv), leading};
}

QuotientLaw quotient_law(const FormalGroupLaw& F, const SubgroupPoints& H,
                         const std::optional<RingElement>& localize_at) {
  LubinG lg = lubin_g(F, H, localize_at);
  const Ring& A = lg.g.ring();
  auto [G, iso] = transport(F, lg.g);
  // Conjugate by t(x) = f_H'(0) x, so that f = t o g_H intertwines F with F/H.
  MultiSeries t = MultiSeries::variable(A, {"x"}, G.trunc(), "x").scaled(lg.leading);
  auto [FH, iso_t] = transport(G, t);
  MultiSeries f = ms_substitute(t, {{"x", lg.g.truncated(G.trunc())}});
  return {FH, f};
}

bool quotient_identity_holds(const FormalGroupLaw& F, const QuotientLaw& q) {
  return is_homomorphism(q.f, F, q.law);
}

}  // namespace fgc
