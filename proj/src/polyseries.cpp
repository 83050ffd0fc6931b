// SPDX-License-Identifier: Apache-2.0
#include "fgc/polyseries.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <set>

#include "fgc/errors.hpp"

namespace fgc {

namespace {

int degree_of(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

std::string describe_context(const MultiSeries& s) {
  std::string out = s.ring().describe() + "[[";
  for (std::size_t i = 0; i < s.vars().size(); ++i) out += (i ? "," : "") + s.vars()[i];
  return out + "]]/deg>" + std::to_string(s.trunc());
}

void require_same_context(const MultiSeries& a, const MultiSeries& b) {
  if (!a.same_context(b))
    throw ContextMismatch(describe_context(a) + " vs " + describe_context(b));
}

// A coefficient needs parentheses when it prints as more than one signed term.
bool needs_parens(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] == ' ') return true;
  return false;
}

}  // namespace

MultiSeries::MultiSeries(Ring ring, std::vector<std::string> vars, int trunc)
    : ring_(ring), vars_(std::move(vars)), trunc_(trunc) {
  if (trunc_ < 0) throw InvalidArgument("negative truncation");
  std::set<std::string> seen(vars_.begin(), vars_.end());
  if (seen.size() != vars_.size()) throw InvalidArgument("repeated variable name");
}

MultiSeries::MultiSeries(Ring ring, std::vector<std::string> vars, int trunc, Terms terms)
    : MultiSeries(ring, std::move(vars), trunc) {
  for (auto& [e, c] : terms) {
    if (e.size() != vars_.size()) throw InvalidArgument("exponent length does not match variables");
    for (int k : e)
      if (k < 0) throw InvalidArgument("negative exponent in a power series");
    terms_.emplace(e, ring_.coerce(c));
  }
  normalize();
}

void MultiSeries::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    // Zeros known only to some q-precision are kept so the loss is tracked.
    if (it->second.is_exact_zero() || degree_of(it->first) > trunc_)
      it = terms_.erase(it);
    else
      ++it;
  }
}

MultiSeries MultiSeries::constant(Ring ring, std::vector<std::string> vars, int trunc,
                                  const RingElement& c) {
  Exponent zero(vars.size(), 0);
  return MultiSeries(ring, std::move(vars), trunc, Terms{{zero, c}});
}

MultiSeries MultiSeries::variable(Ring ring, std::vector<std::string> vars, int trunc,
                                  const std::string& name) {
  MultiSeries s(ring, std::move(vars), trunc);
  Exponent e(s.vars_.size(), 0);
  e[s.var_index(name)] = 1;
  return MultiSeries(s.ring_, s.vars_, trunc, Terms{{e, ring.one()}});
}

MultiSeries MultiSeries::univariate(Ring ring, const std::string& var, int trunc,
                                    const std::vector<RingElement>& coeffs) {
  Terms t;
  for (std::size_t k = 0; k < coeffs.size(); ++k) t.emplace(Exponent{static_cast<int>(k)}, coeffs[k]);
  return MultiSeries(ring, {var}, trunc, std::move(t));
}

std::size_t MultiSeries::var_index(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw InvalidArgument("unknown variable " + name);
  return static_cast<std::size_t>(it - vars_.begin());
}

bool MultiSeries::is_zero() const {
  for (const auto& [e, c] : terms_)
    if (!c.is_zero()) return false;
  return true;
}

bool MultiSeries::same_context(const MultiSeries& o) const {
  return ring_ == o.ring_ && vars_ == o.vars_ && trunc_ == o.trunc_;
}

int MultiSeries::valuation() const {
  int v = trunc_ + 1;
  for (const auto& [e, c] : terms_)
    if (!c.is_zero()) v = std::min(v, degree_of(e));
  return v;
}

int MultiSeries::max_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
  return d;
}

RingElement MultiSeries::coefficient(const Exponent& e) const {
  if (e.size() != vars_.size()) throw InvalidArgument("exponent length does not match variables");
  if (degree_of(e) > trunc_)
    throw TruncationError("total degree " + std::to_string(degree_of(e)) + " exceeds truncation " +
                          std::to_string(trunc_));
  auto it = terms_.find(e);
  return it == terms_.end() ? ring_.zero() : it->second;
}

RingElement MultiSeries::constant_term() const {
  return coefficient(Exponent(vars_.size(), 0));
}

RingElement MultiSeries::coefficient(int k) const {
  if (vars_.size() != 1) throw InvalidArgument("series is not univariate");
  return coefficient(Exponent{k});
}

MultiSeries MultiSeries::truncated(int trunc) const {
  if (trunc > trunc_ && !is_polynomial())
    throw TruncationError("cannot raise the truncation of a series known to degree " +
                          std::to_string(trunc_));
  return MultiSeries(ring_, vars_, trunc, terms_);
}

MultiSeries MultiSeries::change_ring(const Ring& ring) const {
  Terms t;
  for (const auto& [e, c] : terms_) t.emplace(e, ring.coerce(c));
  return MultiSeries(ring, vars_, trunc_, std::move(t));
}

MultiSeries MultiSeries::embed(const std::vector<std::string>& vars) const {
  if (vars.size() < vars_.size()) throw InvalidArgument("embedding into fewer variables");
  Terms t;
  for (const auto& [e, c] : terms_) {
    Exponent e2(vars.size(), 0);
    std::copy(e.begin(), e.end(), e2.begin());
    t.emplace(std::move(e2), c);
  }
  return MultiSeries(ring_, vars, trunc_, std::move(t));
}

MultiSeries MultiSeries::scaled(const RingElement& c) const {
  RingElement k = ring_.coerce(c);
  Terms t;
  for (const auto& [e, v] : terms_) t.emplace(e, v * k);
  return MultiSeries(ring_, vars_, trunc_, std::move(t));
}

MultiSeries MultiSeries::pow(int n) const {
  if (n < 0) return ms_inverse(*this).pow(-n);
  MultiSeries result = constant(ring_, vars_, trunc_, ring_.one());
  MultiSeries base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
  require_same_context(a, b);
  MultiSeries::Terms t = a.terms_;
  for (const auto& [e, c] : b.terms_) {
    auto it = t.find(e);
    if (it == t.end())
      t.emplace(e, c);
    else
      it->second += c;
  }
  MultiSeries r(a.ring_, a.vars_, a.trunc_);
  r.terms_ = std::move(t);
  r.normalize();
  return r;
}

MultiSeries operator-(const MultiSeries& a) {
  MultiSeries r = a;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return a + (-b); }

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
  require_same_context(a, b);
  std::vector<std::pair<const Exponent*, int>> bd;
  bd.reserve(b.terms_.size());
  for (const auto& [e, c] : b.terms_) bd.emplace_back(&e, degree_of(e));
  MultiSeries::Terms t;
  Exponent sum(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_) {
    const int da = degree_of(ea);
    std::size_t j = 0;
    for (const auto& [eb, cb] : b.terms_) {
      const int db = bd[j++].second;
      if (da + db > a.trunc_) continue;
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = ea[i] + eb[i];
      RingElement p = ca * cb;
      auto it = t.find(sum);
      if (it == t.end())
        t.emplace(sum, std::move(p));
      else
        it->second += p;
    }
  }
  MultiSeries r(a.ring_, a.vars_, a.trunc_);
  r.terms_ = std::move(t);
  r.normalize();
  return r;
}

bool operator==(const MultiSeries& a, const MultiSeries& b) {
  if (!a.same_context(b)) return false;
  return (a - b).is_zero();
}

std::string MultiSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const std::pair<const Exponent, RingElement>*> order;
  for (const auto& t : terms_) order.push_back(&t);
  // Graded by total degree; within a degree, earlier variables first.
  std::stable_sort(order.begin(), order.end(), [](auto* x, auto* y) {
    int dx = degree_of(x->first), dy = degree_of(y->first);
    if (dx != dy) return dx < dy;
    return x->first > y->first;
  });
  std::string out;
  for (auto* t : order) {
    std::string mono;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      int k = t->first[i];
      if (k == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (k > 1) mono += "^" + std::to_string(k);
    }
    std::string c = t->second.to_string();
    if (c == "0") continue;
    bool negative = false;
    if (needs_parens(c)) {
      c = "(" + c + ")";
    } else if (c[0] == '-') {
      negative = true;
      c = c.substr(1);
    }
    std::string body;
    if (mono.empty())
      body = c;
    else if (c == "1")
      body = mono;
    else
      body = c + "*" + mono;
    if (out.empty())
      out = negative ? "-" + body : body;
    else
      out += negative ? " - " + body : " + " + body;
  }
  return out.empty() ? "0" : out;
}

MultiSeries ms_mul(const MultiSeries& a, const MultiSeries& b) { return a * b; }

RingElement ms_coefficient(const MultiSeries& f, const Exponent& e) { return f.coefficient(e); }

MultiSeries ms_substitute(const MultiSeries& f,
                          const std::map<std::string, MultiSeries>& bindings) {
  if (bindings.empty()) throw InvalidArgument("substitution without bindings");
  const MultiSeries& first = bindings.begin()->second;
  const Ring target_ring = first.ring();
  const std::vector<std::string> target_vars = first.vars();
  const int target_trunc = first.trunc();

  bool constants = false;
  std::vector<MultiSeries> images;
  images.reserve(f.vars().size());
  for (const auto& [name, s] : bindings) {
    require_same_context(first, s);
    f.var_index(name);
    if (!s.constant_term().is_zero()) constants = true;
  }
  for (const auto& v : f.vars()) {
    auto it = bindings.find(v);
    if (it != bindings.end())
      images.push_back(it->second);
    else
      images.push_back(MultiSeries::variable(target_ring, target_vars, target_trunc, v));
  }
  if (constants && !f.is_polynomial())
    throw ConstantTermError("a binding has a nonzero constant term but the series is truncated at " +
                            std::to_string(f.trunc()));
  if (f.trunc() < target_trunc && !f.is_polynomial())
    throw TruncationError("series known to degree " + std::to_string(f.trunc()) +
                          " substituted into a context of degree " + std::to_string(target_trunc));

  // Horner over the variables in order: f = sum_k x_0^k f_k(x_1, ...), with
  // powers of each image cached. Terms are lexicographically sorted, so each
  // f_k is a contiguous run.
  std::vector<std::vector<MultiSeries>> powers(images.size());
  auto power = [&](std::size_t i, int k) -> const MultiSeries& {
    auto& cache = powers[i];
    if (cache.empty())
      cache.push_back(MultiSeries::constant(target_ring, target_vars, target_trunc, target_ring.one()));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[i]);
    return cache[k];
  };
  std::vector<int> vals(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) vals[i] = images[i].valuation();
  std::vector<const std::pair<const Exponent, RingElement>*> terms;
  for (const auto& t : f.terms()) terms.push_back(&t);

  auto rec = [&](auto& self, std::size_t begin, std::size_t end, std::size_t i,
                 long low) -> MultiSeries {
    if (i == images.size())
      return MultiSeries::constant(target_ring, target_vars, target_trunc,
                                   target_ring.coerce(terms[begin]->second));
    MultiSeries acc(target_ring, target_vars, target_trunc);
    for (std::size_t b = begin; b < end;) {
      const int k = terms[b]->first[i];
      std::size_t e = b;
      while (e < end && terms[e]->first[i] == k) ++e;
      const long low_k = low + static_cast<long>(k) * vals[i];
      if (low_k <= target_trunc) {
        MultiSeries inner = self(self, b, e, i + 1, low_k);
        if (!inner.is_zero()) acc += k == 0 ? inner : power(i, k) * inner;
      }
      b = e;
    }
    return acc;
  };
  if (terms.empty()) return MultiSeries(target_ring, target_vars, target_trunc);
  return rec(rec, 0, terms.size(), 0, 0);
}

MultiSeries ms_inverse(const MultiSeries& f) {
  RingElement c = f.constant_term();
  auto ci = c.try_inverse();
  if (!ci) throw NotAUnit("constant term " + c.to_string() + " is not a unit");
  MultiSeries one = MultiSeries::constant(f.ring(), f.vars(), f.trunc(), f.ring().one());
  MultiSeries u = one - f.scaled(*ci);  // f = c (1 - u), u has no constant term
  MultiSeries sum = one;
  MultiSeries p = one;
  for (int k = 1; k <= f.trunc(); ++k) {
    p = p * u;
    if (p.is_zero()) break;
    sum += p;
  }
  return sum.scaled(*ci);
}

MultiSeries ms_derivative(const MultiSeries& f, const std::string& var) {
  if (f.trunc() < 1 && !f.is_polynomial())
    throw TruncationError("derivative of a series known only to degree 0");
  const std::size_t i = f.var_index(var);
  MultiSeries::Terms t;
  for (const auto& [e, c] : f.terms()) {
    if (e[i] == 0) continue;
    Exponent e2 = e;
    e2[i] -= 1;
    t.emplace(std::move(e2), c * f.ring().from_integer(e[i]));
  }
  return MultiSeries(f.ring(), f.vars(), std::max(f.trunc() - 1, 0), std::move(t));
}

MultiSeries ms_integral(const MultiSeries& f, const std::string& var) {
  if (!f.ring().is_q_algebra()) throw NotQAlgebra(f.ring().describe() + " is not a Q-algebra");
  const std::size_t i = f.var_index(var);
  MultiSeries::Terms t;
  for (const auto& [e, c] : f.terms()) {
    Exponent e2 = e;
    e2[i] += 1;
    t.emplace(std::move(e2), c * f.ring().from_rational(Rational(1, e2[i])));
  }
  return MultiSeries(f.ring(), f.vars(), f.trunc() + 1, std::move(t));
}

MultiSeries ms_reversion(const MultiSeries& f) {
  if (f.vars().size() != 1) throw InvalidArgument("reversion needs a univariate series");
  if (!f.constant_term().is_zero()) throw ConstantTermError("reversion needs f(0) = 0");
  const int T = f.trunc();
  if (T < 1) throw TruncationError("reversion needs truncation at least 1");
  RingElement a1 = f.coefficient(1);
  auto a1i = a1.try_inverse();
  if (!a1i) throw NotAUnit("linear coefficient " + a1.to_string() + " is not a unit");

  const Ring& R = f.ring();
  const std::string& x = f.vars()[0];
  // The derivative is exact to degree T - 1, which is all Newton needs.
  MultiSeries df = ms_derivative(f, x);
  MultiSeries g = MultiSeries::variable(R, {x}, T, x).scaled(*a1i);
  int p = 1;
  while (p < T) {
    p = std::min(2 * p, T);
    MultiSeries gp = g.truncated(p);
    MultiSeries xp = MultiSeries::variable(R, {x}, p, x);
    MultiSeries h = ms_substitute(f.truncated(p), {{x, gp}}) - xp;
    // h starts in degree >= 2, so f'(g) is needed only below degree p - 1.
    MultiSeries d = ms_substitute(df.truncated(p - 1), {{x, gp.truncated(p - 1)}});
    MultiSeries dfull(R, {x}, p, d.terms());
    MultiSeries step = h * ms_inverse(dfull);
    g = MultiSeries(R, {x}, T, (gp - step).terms());
  }
  return g;
}

RingElement ms_evaluate(const MultiSeries& f, const RingElement& point) {
  if (f.vars().size() != 1) throw InvalidArgument("evaluation needs a univariate series");
  const Ring& A = point.ring();
  if (!f.is_polynomial() && !nilpotency_index(point, f.trunc() + 1))
    throw ConstantTermError("cannot evaluate a series truncated at degree " +
                            std::to_string(f.trunc()) + " at the non-nilpotent element " +
                            point.to_string());
  RingElement acc = A.zero();
  for (int k = f.max_degree(); k >= 0; --k) acc = acc * point + A.coerce(f.coefficient(k));
  return acc;
}

}  // namespace fgc
