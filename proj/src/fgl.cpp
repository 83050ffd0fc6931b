// SPDX-License-Identifier: Apache-2.0
#include "fgc/fgl.hpp"

#include <iterator>

#include "fgc/errors.hpp"

namespace fgc {

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};

MultiSeries in_xy(const MultiSeries& law) {
  if (law.vars().size() != 2) throw InvalidArgument("a group law has two variables");
  if (law.vars() == kXY) return law;
  return MultiSeries(law.ring(), kXY, law.trunc(), law.terms());
}

std::string first_defect(const MultiSeries& d) {
  auto it = d.terms().begin();
  while (std::next(it) != d.terms().end() && it->second.is_zero()) ++it;
  const auto& [e, c] = *it;
  std::string mono;
  for (std::size_t i = 0; i < e.size(); ++i)
    mono += (i ? "," : "") + std::to_string(e[i]);
  return "coefficient at (" + mono + ") is " + c.to_string();
}

int top_bit(long k) { return 63 - __builtin_clzl(static_cast<unsigned long>(k)); }

}  // namespace

AxiomReport check_axioms(const MultiSeries& raw) {
  MultiSeries F = in_xy(raw);
  const Ring& R = F.ring();
  const int T = F.trunc();
  AxiomReport report;
  MultiSeries x = MultiSeries::variable(R, kXY, T, "x");
  MultiSeries y = MultiSeries::variable(R, kXY, T, "y");
  MultiSeries zero(R, kXY, T);

  MultiSeries d1 = ms_substitute(F, {{"y", zero}}) - x;
  MultiSeries d2 = ms_substitute(F, {{"x", zero}}) - y;
  if (!d1.is_zero() || !d2.is_zero()) {
    report.unit = false;
    report.detail = "unit axiom: " + first_defect(d1.is_zero() ? d2 : d1);
  }
  MultiSeries d3 = ms_substitute(F, {{"x", y}, {"y", x}}) - F;
  if (!d3.is_zero()) {
    report.commutative = false;
    if (report.detail.empty()) report.detail = "commutativity: " + first_defect(d3);
  }
  MultiSeries X = MultiSeries::variable(R, kXYZ, T, "x");
  MultiSeries Y = MultiSeries::variable(R, kXYZ, T, "y");
  MultiSeries Z = MultiSeries::variable(R, kXYZ, T, "z");
  MultiSeries left = ms_substitute(F, {{"x", ms_substitute(F, {{"x", X}, {"y", Y}})}, {"y", Z}});
  MultiSeries right = ms_substitute(F, {{"x", X}, {"y", ms_substitute(F, {{"x", Y}, {"y", Z}})}});
  MultiSeries d4 = left - right;
  if (!d4.is_zero()) {
    report.associative = false;
    if (report.detail.empty()) report.detail = "associativity: " + first_defect(d4);
  }
  return report;
}

FormalGroupLaw FormalGroupLaw::from_series(const MultiSeries& law) {
  MultiSeries F = in_xy(law);
  AxiomReport r = check_axioms(F);
  if (!r.ok()) throw AxiomFailure(r.detail);
  return FormalGroupLaw(F);
}

FormalGroupLaw FormalGroupLaw::additive(const Ring& ring, int trunc) {
  MultiSeries x = MultiSeries::variable(ring, kXY, trunc, "x");
  MultiSeries y = MultiSeries::variable(ring, kXY, trunc, "y");
  return from_series(x + y);
}

FormalGroupLaw FormalGroupLaw::multiplicative(const Ring& ring, int trunc) {
  MultiSeries x = MultiSeries::variable(ring, kXY, trunc, "x");
  MultiSeries y = MultiSeries::variable(ring, kXY, trunc, "y");
  return from_series(x + y - x * y);
}

FormalGroupLaw FormalGroupLaw::from_log(const MultiSeries& log) {
  if (log.vars().size() != 1) throw InvalidArgument("a logarithm is univariate");
  if (!log.ring().is_q_algebra()) throw NotQAlgebra(log.ring().describe() + " is not a Q-algebra");
  if (!log.constant_term().is_zero() || !log.coefficient(1).is_one())
    throw NonStrictIsomorphism("a logarithm needs l(0) = 0 and l'(0) = 1");
  MultiSeries exp = ms_reversion(log);
  const std::string& v = log.vars()[0];
  MultiSeries x = MultiSeries::variable(log.ring(), kXY, log.trunc(), "x");
  MultiSeries y = MultiSeries::variable(log.ring(), kXY, log.trunc(), "y");
  MultiSeries sum = ms_substitute(log, {{v, x}}) + ms_substitute(log, {{v, y}});
  return from_series(ms_substitute(exp, {{v, sum}}));
}

std::optional<RingElement> FormalGroupLaw::bilinear_coefficient() const {
  if (!law_.is_polynomial()) return std::nullopt;
  RingElement c = ring().zero();
  for (const auto& [e, v] : law_.terms()) {
    if (e == Exponent{1, 1})
      c = v;
    else if (!(e == Exponent{1, 0} || e == Exponent{0, 1}) || !v.is_one())
      return std::nullopt;
  }
  return c;
}

FormalGroupLaw FormalGroupLaw::base_change(const Ring& ring) const {
  return FormalGroupLaw(law_.change_ring(ring));
}

FormalGroupLaw FormalGroupLaw::truncated(int trunc) const {
  return FormalGroupLaw(law_.truncated(trunc));
}

FormalGroupLaw make_fgl(LawKind kind, const Ring& ring, int trunc,
                        const std::optional<MultiSeries>& log) {
  switch (kind) {
    case LawKind::additive:
      return FormalGroupLaw::additive(ring, trunc);
    case LawKind::multiplicative:
      return FormalGroupLaw::multiplicative(ring, trunc);
    case LawKind::from_log:
      if (!log) throw InvalidArgument("from_log needs a logarithm");
      if (log->ring() != ring || log->trunc() != trunc)
        throw ContextMismatch("logarithm does not live over the requested ring and truncation");
      return FormalGroupLaw::from_log(*log);
  }
  throw InvalidArgument("unknown law kind");
}

MultiSeries formal_sum(const FormalGroupLaw& F, const MultiSeries& a, const MultiSeries& b) {
  return ms_substitute(F.law(), {{"x", a}, {"y", b}});
}

MultiSeries formal_sum(const FormalGroupLaw& F, const MultiSeries& a, const RingElement& c) {
  const Ring& A = a.ring();
  RingElement cc = A.coerce(c);
  if (F.law().is_polynomial())
    return formal_sum(F, a, MultiSeries::constant(A, a.vars(), a.trunc(), cc));
  if (!a.constant_term().is_zero())
    throw ConstantTermError("formal sum with a constant needs a series without constant term");
  auto n = nilpotency_index(cc, F.trunc() + 1);
  if (!n) throw ConstantTermError(cc.to_string() + " is not nilpotent");
  if (F.trunc() < a.trunc() + *n - 1)
    throw TruncationError("law known to degree " + std::to_string(F.trunc()) + ", need " +
                          std::to_string(a.trunc() + *n - 1));
  // F(x, c) = sum_{j < n} c^j F_j(x) as a univariate series, then x -> a.
  std::vector<RingElement> cp{A.one()};
  for (int j = 1; j < *n; ++j) cp.push_back(cp.back() * cc);
  MultiSeries::Terms t;
  for (const auto& [e, v] : F.law().terms()) {
    if (e[1] >= *n || e[0] > a.trunc()) continue;
    RingElement term = A.coerce(v) * cp[e[1]];
    auto it = t.find(Exponent{e[0]});
    if (it == t.end())
      t.emplace(Exponent{e[0]}, term);
    else
      it->second += term;
  }
  MultiSeries p(A, {"x"}, a.trunc(), std::move(t));
  return ms_substitute(p, {{"x", a}});
}

RingElement formal_sum(const FormalGroupLaw& F, const RingElement& a, const RingElement& b) {
  if (a.ring() != b.ring())
    throw RingMismatch(a.ring().describe() + " vs " + b.ring().describe());
  const Ring& A = a.ring();
  const MultiSeries& law = F.law();
  int top = law.max_degree();
  std::vector<RingElement> pa{A.one()}, pb{A.one()};
  if (!law.is_polynomial()) {
    top = law.trunc() + 1;
    for (int k = 1; k <= top; ++k) {
      pa.push_back(pa.back() * a);
      pb.push_back(pb.back() * b);
    }
    for (int i = 0; i <= top; ++i)
      if (!(pa[i] * pb[top - i]).is_exact_zero())
        throw ConstantTermError("points " + a.to_string() + ", " + b.to_string() +
                                " are not nilpotent enough for a law truncated at degree " +
                                std::to_string(law.trunc()));
  } else {
    for (int k = 1; k <= top; ++k) {
      pa.push_back(pa.back() * a);
      pb.push_back(pb.back() * b);
    }
  }
  RingElement acc = A.zero();
  for (const auto& [e, c] : law.terms()) acc += A.coerce(c) * pa[e[0]] * pb[e[1]];
  return acc;
}

MultiSeries inverse_series(const FormalGroupLaw& F, const std::string& var) {
  const Ring& R = F.ring();
  const int T = F.trunc();
  MultiSeries x = MultiSeries::variable(R, {var}, T, var);
  // y <- y - F(x, y) gains one correct degree per round.
  MultiSeries y = -x;
  for (int k = 1; k < T; ++k) {
    MultiSeries defect = formal_sum(F, x, y);
    if (defect.is_zero()) break;
    y = y - defect;
  }
  return y;
}

MultiSeries formal_inverse(const FormalGroupLaw& F, const MultiSeries& a) {
  if (!a.constant_term().is_zero())
    throw ConstantTermError("formal inverse needs a series without constant term");
  MultiSeries iota = inverse_series(F, "x");
  return ms_substitute(iota, {{"x", a}});
}

RingElement formal_inverse(const FormalGroupLaw& F, const RingElement& a) {
  const Ring& A = a.ring();
  if (auto c = F.bilinear_coefficient()) {
    // x + y + cxy = 0 gives y = -x / (1 + cx).
    RingElement denom = A.one() + A.coerce(*c) * a;
    auto inv = denom.try_inverse();
    if (!inv) throw NotAUnit("1 + c*a = " + denom.to_string() + " is not a unit");
    return -(a * *inv);
  }
  return ms_evaluate(inverse_series(F, "x"), a);
}

RingElement formal_difference(const FormalGroupLaw& F, const RingElement& a,
                              const RingElement& b) {
  return formal_sum(F, a, formal_inverse(F, b));
}

MultiSeries n_series(const FormalGroupLaw& F, long k, const std::string& var) {
  const Ring& R = F.ring();
  const int T = F.trunc();
  MultiSeries x = MultiSeries::variable(R, {var}, T, var);
  if (k == 0) return MultiSeries(R, {var}, T);
  if (k < 0) return ms_substitute(n_series(F, -k, var), {{var, inverse_series(F, var)}});
  MultiSeries acc = x;
  for (int bit = top_bit(k) - 1; bit >= 0; --bit) {
    acc = formal_sum(F, acc, acc);
    if ((k >> bit) & 1) acc = formal_sum(F, acc, x);
  }
  return acc;
}

RingElement n_series_at(const FormalGroupLaw& F, long k, const RingElement& a) {
  const Ring& A = a.ring();
  if (k == 0) return A.zero();
  if (k < 0) {
    // For x + y + cxy, 1 + c [k](a) = (1 + c a)^k; exact when 1 + c a is a
    // monomial, as for qhat = 1 - q.
    if (auto c = F.bilinear_coefficient(); c && !c->is_zero()) {
      RingElement cc = A.coerce(*c);
      auto c_inv = cc.try_inverse();
      auto u_inv = (A.one() + cc * a).try_inverse();
      if (c_inv && u_inv) return (u_inv->pow(-k) - A.one()) * *c_inv;
    }
    return formal_inverse(F, n_series_at(F, -k, a));
  }
  RingElement acc = a;
  for (int bit = top_bit(k) - 1; bit >= 0; --bit) {
    acc = formal_sum(F, acc, acc);
    if ((k >> bit) & 1) acc = formal_sum(F, acc, a);
  }
  return acc;
}

MultiSeries fgl_log(const FormalGroupLaw& F, const std::string& var) {
  const Ring& R = F.ring();
  if (!R.is_q_algebra()) throw NotQAlgebra(R.describe() + " is not a Q-algebra");
  const int T = F.trunc();
  // l'(x) = 1 / F_y(x, 0), known to degree T - 1.
  MultiSeries::Terms dy;
  for (const auto& [e, c] : F.law().terms())
    if (e[1] == 1) dy.emplace(Exponent{e[0]}, c);
  MultiSeries derivative(R, {var}, T - 1, std::move(dy));
  return ms_integral(ms_inverse(derivative), var);
}

MultiSeries fgl_exp(const FormalGroupLaw& F, const std::string& var) {
  return ms_reversion(fgl_log(F, var));
}

std::pair<FormalGroupLaw, Isomorphism> transport(const FormalGroupLaw& F0,
                                                 const MultiSeries& theta) {
  if (theta.vars().size() != 1) throw InvalidArgument("a coordinate change is univariate");
  if (!theta.constant_term().is_zero()) throw ConstantTermError("theta(0) must vanish");
  const Ring& R = theta.ring();
  FormalGroupLaw F = F0.ring() == R ? F0 : F0.base_change(R);
  const int T = std::min(F.trunc(), theta.trunc());
  if (F.trunc() != T) F = F.truncated(T);
  MultiSeries th = theta.truncated(T);
  const std::string& v = th.vars()[0];
  MultiSeries inv = ms_reversion(th);  // NotAUnit for a non-unit linear term
  MultiSeries x = MultiSeries::variable(R, kXY, T, "x");
  MultiSeries y = MultiSeries::variable(R, kXY, T, "y");
  MultiSeries inner = formal_sum(F, ms_substitute(inv, {{v, x}}), ms_substitute(inv, {{v, y}}));
  FormalGroupLaw G = FormalGroupLaw::from_series(ms_substitute(th, {{v, inner}}));
  MultiSeries th_x(R, {"x"}, T, th.terms());
  return {G, Isomorphism{th_x, F, G}};
}

bool is_homomorphism(const MultiSeries& theta, const FormalGroupLaw& F, const FormalGroupLaw& G) {
  const Ring& R = G.ring();
  const int T = std::min({theta.trunc(), F.trunc(), G.trunc()});
  const std::string& v = theta.vars()[0];
  MultiSeries th = theta.truncated(T).change_ring(R);
  FormalGroupLaw Fr = F.ring() == R ? F.truncated(T) : F.base_change(R).truncated(T);
  MultiSeries x = MultiSeries::variable(R, kXY, T, "x");
  MultiSeries y = MultiSeries::variable(R, kXY, T, "y");
  MultiSeries lhs = ms_substitute(th, {{v, Fr.law()}});
  MultiSeries rhs = formal_sum(G.truncated(T), ms_substitute(th, {{v, x}}),
                               ms_substitute(th, {{v, y}}));
  return lhs == rhs;
}

}  // namespace fgc
