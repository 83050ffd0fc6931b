// SPDX-License-Identifier: Apache-2.0
#include "fgc/coefficients.hpp"

#include <algorithm>
#include <functional>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <unordered_map>

#include "fgc/errors.hpp"

namespace fgc {

namespace detail {

struct RingData {
  RingKind kind = RingKind::rationals;
  std::string descriptor;
  std::optional<Ring> base;
  std::string parameter;
  int order = 0;
  int tail = 0;
  std::vector<unsigned long> primes;
  long d = 0;
  Integer modulus;
  std::vector<Generator> generators;
  std::vector<int> relation_degree;  // 0 for a free generator

  static Ring intern(std::unique_ptr<RingData> data);
  static const RingData* rationals_data();

  // Element internals (RingData is a friend of RingElement).
  using SeriesTerms = std::vector<std::pair<long, RingElement>>;
  using PolyMap = std::map<std::vector<int>, RingElement>;

  static RingElement scalar(const Ring& r, Rational v);
  static RingElement quad(const Ring& r, Rational a, Rational b);
  static RingElement make_series(const Ring& r, SeriesTerms terms, long precision);
  static RingElement make_polynomial(const Ring& r, PolyMap acc);
  static const Rational& scalar_value(const RingElement& x);
  static const QuadraticValue& quad_value(const RingElement& x);
  static const SeriesValue& series_value(const RingElement& x);
  static const PolynomialValue& poly_value(const RingElement& x);

  static RingElement add(const RingElement& a, const RingElement& b, bool subtract);
  static RingElement mul(const RingElement& a, const RingElement& b);
  static RingElement neg(const RingElement& a);
  static std::optional<RingElement> inverse(const RingElement& a);
  static std::optional<RingElement> series_inverse(const RingElement& a);
  static std::optional<RingElement> polynomial_inverse(const RingElement& a);
  static void reduce(const Ring& r, PolyMap& acc);
};

namespace {
std::mutex& intern_mutex() {
  static std::mutex m;
  return m;
}
std::unordered_map<std::string, std::unique_ptr<RingData>>& intern_table() {
  static std::unordered_map<std::string, std::unique_ptr<RingData>> table;
  return table;
}
}  // namespace

Ring RingData::intern(std::unique_ptr<RingData> data) {
  std::lock_guard<std::mutex> lock(intern_mutex());
  auto& table = intern_table();
  auto it = table.find(data->descriptor);
  if (it != table.end()) return Ring(it->second.get());
  const RingData* raw = data.get();
  table.emplace(data->descriptor, std::move(data));
  return Ring(raw);
}

const RingData* RingData::rationals_data() {
  static const RingData* cached = [] {
    auto data = std::make_unique<RingData>();
    data->kind = RingKind::rationals;
    data->descriptor = "QQ";
    return intern(std::move(data)).data_;
  }();
  return cached;
}

}  // namespace detail

using detail::PolynomialValue;
using detail::QuadraticValue;
using detail::RingData;
using detail::SeriesValue;

namespace {

using SeriesTerms = std::vector<std::pair<long, RingElement>>;

long sat_add(long a, long b) {
  if (a >= kExactPrecision || b >= kExactPrecision) return kExactPrecision;
  return a + b;
}

bool contains_series(const Ring& r) {
  switch (r.kind()) {
    case RingKind::power_series:
    case RingKind::laurent:
      return true;
    case RingKind::polynomial:
      return contains_series(r.base());
    default:
      return false;
  }
}

// Removes every inverted prime from |n|.
Integer strip_primes(Integer n, const std::vector<unsigned long>& primes) {
  if (n < 0) n = -n;
  for (unsigned long p : primes) {
    if (n == 0) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
  }
  return n;
}

std::vector<unsigned long> prime_factors(Integer n) {
  if (n < 0) n = -n;
  std::vector<unsigned long> out;
  for (unsigned long p = 2; n > 1; ++p) {
    if (Integer(p) * p > n) {
      if (!n.fits_ulong_p()) throw InvalidArgument("cannot localize at a large prime factor");
      out.push_back(n.get_ui());
      break;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.push_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
    }
  }
  return out;
}

bool is_squarefree_nonsquare(long d) {
  if (d == 0 || d == 1) return false;
  long a = d < 0 ? -d : d;
  for (long p = 2; p * p <= a; ++p)
    if (a % (p * p) == 0) return false;
  return true;
}

Integer mod_normalize(const Integer& v, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

std::string to_string(const Rational& r) { return r.get_str(10); }

Rational floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

// ---------------------------------------------------------------------------
// Ring construction

Ring::Ring() : data_(RingData::rationals_data()) {}

Ring Ring::rationals() { return Ring(); }

Ring Ring::integers(std::vector<unsigned long> inverted_primes) {
  std::sort(inverted_primes.begin(), inverted_primes.end());
  inverted_primes.erase(std::unique(inverted_primes.begin(), inverted_primes.end()),
                        inverted_primes.end());
  auto data = std::make_unique<RingData>();
  data->kind = RingKind::integers;
  data->descriptor = "ZZ";
  if (!inverted_primes.empty()) {
    data->descriptor += "[";
    for (std::size_t i = 0; i < inverted_primes.size(); ++i) {
      if (inverted_primes[i] < 2 || prime_factors(Integer(inverted_primes[i])).size() != 1 ||
          prime_factors(Integer(inverted_primes[i]))[0] != inverted_primes[i])
        throw InvalidArgument("inverted element is not a prime: " +
                              std::to_string(inverted_primes[i]));
      if (i) data->descriptor += ",";
      data->descriptor += "1/" + std::to_string(inverted_primes[i]);
    }
    data->descriptor += "]";
  }
  data->primes = std::move(inverted_primes);
  return RingData::intern(std::move(data));
}

Ring Ring::gaussian_rationals() { return quadratic(-1); }

Ring Ring::quadratic(long d) {
  if (!is_squarefree_nonsquare(d))
    throw InvalidArgument("quadratic field needs a squarefree d other than 0, 1");
  auto data = std::make_unique<RingData>();
  data->kind = RingKind::quadratic;
  data->d = d;
  data->descriptor = d == -1 ? "QQ(i)" : "QQ(sqrt(" + std::to_string(d) + "))";
  return RingData::intern(std::move(data));
}

Ring Ring::integers_mod(const Integer& modulus) {
  if (modulus < 2) throw InvalidArgument("modulus must be at least 2");
  auto data = std::make_unique<RingData>();
  data->kind = RingKind::integers_mod;
  data->modulus = modulus;
  data->descriptor = "ZZ/" + modulus.get_str();
  return RingData::intern(std::move(data));
}

namespace {
void check_parameter_name(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    throw InvalidArgument("bad variable name '" + name + "'");
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      throw InvalidArgument("bad variable name '" + name + "'");
  if (name == "O" || name == "sqrt" || name == "i")
    throw InvalidArgument("reserved variable name '" + name + "'");
}
}  // namespace

Ring Ring::power_series(const Ring& base, const std::string& parameter, int order) {
  if (order < 0) throw InvalidArgument("series order must be non-negative");
  if (contains_series(base))
    throw InvalidArgument("the base of a series ring must not itself contain a series parameter");
  check_parameter_name(parameter);
  auto data = std::make_unique<RingData>();
  data->kind = RingKind::power_series;
  data->base = base;
  data->parameter = parameter;
  data->order = order;
  data->descriptor =
      "series(" + base.describe() + "," + parameter + "," + std::to_string(order) + ")";
  return RingData::intern(std::move(data));
}

Ring Ring::laurent(const Ring& base, const std::string& parameter, int order, int tail) {
  if (tail < 0) throw InvalidArgument("Laurent tail must be non-negative");
  if (order < -tail) throw InvalidArgument("Laurent order below tail");
  if (contains_series(base))
    throw InvalidArgument("the base of a series ring must not itself contain a series parameter");
  check_parameter_name(parameter);
  auto data = std::make_unique<RingData>();
  data->kind = RingKind::laurent;
  data->base = base;
  data->parameter = parameter;
  data->order = order;
  data->tail = tail;
  data->descriptor = "laurent(" + base.describe() + "," + parameter + "," +
                     std::to_string(order) + "," + std::to_string(tail) + ")";
  return RingData::intern(std::move(data));
}

Ring Ring::polynomial(const Ring& base, const std::vector<Generator>& generators) {
  if (generators.empty()) throw InvalidArgument("polynomial ring needs at least one generator");
  std::set<std::string> names;
  auto data = std::make_unique<RingData>();
  data->kind = RingKind::polynomial;
  data->base = base;
  data->descriptor = "poly(" + base.describe();
  for (const auto& g : generators) {
    check_parameter_name(g.name);
    if (!names.insert(g.name).second) throw InvalidArgument("duplicate generator " + g.name);
    Generator stored{g.name, {}};
    for (const auto& c : g.relation) stored.relation.push_back(base.coerce(c));
    data->descriptor += "," + g.name;
    if (!stored.relation.empty()) {
      // Print the monic relation inside the free one-generator ring.
      Ring free = Ring::polynomial(base, {Generator{g.name, {}}});
      RingElement x = free.generator(0);
      RingElement rel = x.pow(static_cast<long>(stored.relation.size()));
      for (std::size_t j = 0; j < stored.relation.size(); ++j)
        rel += free.coerce(stored.relation[j]) * x.pow(static_cast<long>(j));
      data->descriptor += ":" + rel.to_string();
    }
    data->relation_degree.push_back(static_cast<int>(stored.relation.size()));
    data->generators.push_back(std::move(stored));
  }
  data->descriptor += ")";
  // Spaces in printed relations are irrelevant to identity.
  data->descriptor.erase(std::remove(data->descriptor.begin(), data->descriptor.end(), ' '),
                         data->descriptor.end());
  return RingData::intern(std::move(data));
}

// ---------------------------------------------------------------------------
// Ring accessors

RingKind Ring::kind() const { return data_->kind; }
const std::string& Ring::describe() const { return data_->descriptor; }

bool Ring::is_scalar() const {
  switch (kind()) {
    case RingKind::integers:
    case RingKind::rationals:
    case RingKind::quadratic:
    case RingKind::integers_mod:
      return true;
    default:
      return false;
  }
}

bool Ring::is_series() const {
  return kind() == RingKind::power_series || kind() == RingKind::laurent;
}

bool Ring::is_q_algebra() const {
  switch (kind()) {
    case RingKind::rationals:
    case RingKind::quadratic:
      return true;
    case RingKind::integers:
    case RingKind::integers_mod:
      return false;
    default:
      return base().is_q_algebra();
  }
}

bool Ring::truncation_is_ideal() const {
  switch (kind()) {
    case RingKind::laurent:
      return false;
    case RingKind::power_series:
    case RingKind::polynomial:
      return base().truncation_is_ideal();
    default:
      return true;
  }
}

const Ring& Ring::base() const {
  if (!data_->base) throw InvalidArgument(describe() + " has no base ring");
  return *data_->base;
}

const std::string& Ring::parameter() const {
  if (!is_series()) throw InvalidArgument(describe() + " is not a series ring");
  return data_->parameter;
}

int Ring::order() const {
  if (!is_series()) throw InvalidArgument(describe() + " is not a series ring");
  return data_->order;
}

int Ring::tail() const {
  if (!is_series()) throw InvalidArgument(describe() + " is not a series ring");
  return data_->tail;
}

const std::vector<unsigned long>& Ring::inverted_primes() const { return data_->primes; }
long Ring::quadratic_d() const { return data_->d; }
const Integer& Ring::modulus() const { return data_->modulus; }
const std::vector<Generator>& Ring::generators() const { return data_->generators; }

std::size_t Ring::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < data_->generators.size(); ++i)
    if (data_->generators[i].name == name) return i;
  throw InvalidArgument("no generator named " + name + " in " + describe());
}


// ---------------------------------------------------------------------------
// Element internals

RingElement RingData::scalar(const Ring& r, Rational v) { return RingElement(r, std::move(v)); }

RingElement RingData::quad(const Ring& r, Rational a, Rational b) {
  return RingElement(r, QuadraticValue{std::move(a), std::move(b)});
}

const Rational& RingData::scalar_value(const RingElement& x) {
  return std::get<Rational>(x.payload_);
}
const QuadraticValue& RingData::quad_value(const RingElement& x) {
  return std::get<QuadraticValue>(x.payload_);
}
const SeriesValue& RingData::series_value(const RingElement& x) {
  return std::get<SeriesValue>(x.payload_);
}
const PolynomialValue& RingData::poly_value(const RingElement& x) {
  return std::get<PolynomialValue>(x.payload_);
}

RingElement RingData::make_series(const Ring& r, SeriesTerms terms, long precision) {
  const bool laurent = r.kind() == RingKind::laurent;
  if (!laurent) precision = kExactPrecision;
  const long order = r.order();
  const long cap = std::min<long>(precision, order);
  SeriesTerms kept;
  kept.reserve(terms.size());
  bool dropped = false;
  for (auto& t : terms) {
    if (t.second.is_zero()) continue;
    if (t.first > cap) {
      dropped = true;
      continue;
    }
    kept.push_back(std::move(t));
  }
  if (laurent) {
    if (dropped && precision >= kExactPrecision) precision = order;
    if (precision < kExactPrecision && precision > order) precision = order;
  }
  const long floor = laurent ? -static_cast<long>(r.tail()) : 0;
  if (!kept.empty() && kept.front().first < floor)
    throw TailOverflow("exponent " + std::to_string(kept.front().first) + " below the tail of " +
                       r.describe());
  return RingElement(r, SeriesValue{std::move(kept), precision});
}

void RingData::reduce(const Ring& r, PolyMap& acc) {
  const RingData& rd = *r.data_;
  bool changed = true;
  while (changed) {
    changed = false;
    PolyMap next;
    auto accumulate = [&next](const std::vector<int>& e, const RingElement& c) {
      auto it = next.find(e);
      if (it == next.end())
        next.emplace(e, c);
      else
        it->second += c;
    };
    for (auto& [e, c] : acc) {
      if (c.is_zero()) continue;
      std::size_t g = rd.generators.size();
      for (std::size_t i = 0; i < rd.generators.size(); ++i)
        if (rd.relation_degree[i] > 0 && e[i] >= rd.relation_degree[i]) {
          g = i;
          break;
        }
      if (g == rd.generators.size()) {
        accumulate(e, c);
        continue;
      }
      changed = true;
      std::vector<int> lowered = e;
      lowered[g] -= rd.relation_degree[g];
      const auto& rel = rd.generators[g].relation;
      for (std::size_t j = 0; j < rel.size(); ++j) {
        if (rel[j].is_zero()) continue;
        std::vector<int> e2 = lowered;
        e2[g] += static_cast<int>(j);
        accumulate(e2, -(c * rel[j]));
      }
    }
    acc = std::move(next);
  }
}

RingElement RingData::make_polynomial(const Ring& r, PolyMap acc) {
  reduce(r, acc);
  PolynomialValue v;
  for (auto& [e, c] : acc)
    if (!c.is_zero()) v.terms.emplace_back(e, std::move(c));
  return RingElement(r, std::move(v));
}

RingElement RingData::neg(const RingElement& a) {
  const Ring& r = a.ring();
  switch (r.kind()) {
    case RingKind::quadratic: {
      const auto& q = quad_value(a);
      return quad(r, -q.a, -q.b);
    }
    case RingKind::integers_mod:
      return scalar(r, Rational(mod_normalize(-scalar_value(a).get_num(), r.modulus())));
    case RingKind::power_series:
    case RingKind::laurent: {
      const auto& s = series_value(a);
      SeriesTerms t;
      t.reserve(s.terms.size());
      for (const auto& [e, c] : s.terms) t.emplace_back(e, -c);
      return RingElement(r, SeriesValue{std::move(t), s.precision});
    }
    case RingKind::polynomial: {
      PolynomialValue v;
      for (const auto& [e, c] : poly_value(a).terms) v.terms.emplace_back(e, -c);
      return RingElement(r, std::move(v));
    }
    default:
      return scalar(r, -scalar_value(a));
  }
}

RingElement RingData::add(const RingElement& a, const RingElement& b, bool subtract) {
  const Ring& r = a.ring();
  if (r != b.ring())
    throw RingMismatch("cannot combine elements of " + r.describe() + " and " +
                       b.ring().describe());
  switch (r.kind()) {
    case RingKind::quadratic: {
      const auto& x = quad_value(a);
      const auto& y = quad_value(b);
      return subtract ? quad(r, x.a - y.a, x.b - y.b) : quad(r, x.a + y.a, x.b + y.b);
    }
    case RingKind::integers_mod: {
      Integer v = subtract ? Integer(scalar_value(a).get_num() - scalar_value(b).get_num())
                           : Integer(scalar_value(a).get_num() + scalar_value(b).get_num());
      return scalar(r, Rational(mod_normalize(v, r.modulus())));
    }
    case RingKind::power_series:
    case RingKind::laurent: {
      const auto& x = series_value(a);
      const auto& y = series_value(b);
      SeriesTerms out;
      out.reserve(x.terms.size() + y.terms.size());
      auto i = x.terms.begin();
      auto j = y.terms.begin();
      while (i != x.terms.end() || j != y.terms.end()) {
        if (j == y.terms.end() || (i != x.terms.end() && i->first < j->first)) {
          out.push_back(*i++);
        } else if (i == x.terms.end() || j->first < i->first) {
          out.emplace_back(j->first, subtract ? -j->second : j->second);
          ++j;
        } else {
          out.emplace_back(i->first, subtract ? i->second - j->second : i->second + j->second);
          ++i;
          ++j;
        }
      }
      return make_series(r, std::move(out), std::min(x.precision, y.precision));
    }
    case RingKind::polynomial: {
      const auto& x = poly_value(a).terms;
      const auto& y = poly_value(b).terms;
      PolynomialValue v;
      auto i = x.begin();
      auto j = y.begin();
      while (i != x.end() || j != y.end()) {
        if (j == y.end() || (i != x.end() && i->first < j->first)) {
          v.terms.push_back(*i++);
        } else if (i == x.end() || j->first < i->first) {
          v.terms.emplace_back(j->first, subtract ? -j->second : j->second);
          ++j;
        } else {
          RingElement c = subtract ? i->second - j->second : i->second + j->second;
          if (!c.is_zero()) v.terms.emplace_back(i->first, std::move(c));
          ++i;
          ++j;
        }
      }
      return RingElement(r, std::move(v));
    }
    default:
      return scalar(r, subtract ? Rational(scalar_value(a) - scalar_value(b))
                                : Rational(scalar_value(a) + scalar_value(b)));
  }
}

RingElement RingData::mul(const RingElement& a, const RingElement& b) {
  const Ring& r = a.ring();
  if (r != b.ring())
    throw RingMismatch("cannot multiply elements of " + r.describe() + " and " +
                       b.ring().describe());
  switch (r.kind()) {
    case RingKind::quadratic: {
      const auto& x = quad_value(a);
      const auto& y = quad_value(b);
      return quad(r, x.a * y.a + r.quadratic_d() * x.b * y.b, x.a * y.b + x.b * y.a);
    }
    case RingKind::integers_mod:
      return scalar(r, Rational(mod_normalize(
                           scalar_value(a).get_num() * scalar_value(b).get_num(), r.modulus())));
    case RingKind::power_series:
    case RingKind::laurent: {
      const auto& x = series_value(a);
      const auto& y = series_value(b);
      const bool x_exact_zero = x.terms.empty() && x.precision >= kExactPrecision;
      const bool y_exact_zero = y.terms.empty() && y.precision >= kExactPrecision;
      if (x_exact_zero || y_exact_zero) return r.zero();
      // Valuation of an inexact zero is one past its precision.
      const long vx = x.terms.empty() ? x.precision + 1 : x.terms.front().first;
      const long vy = y.terms.empty() ? y.precision + 1 : y.terms.front().first;
      long precision = std::min(sat_add(x.precision, vy), sat_add(y.precision, vx));
      const long cap = std::min<long>(precision, r.order());
      if (!x.terms.empty() && !y.terms.empty() && precision >= kExactPrecision &&
          x.terms.back().first + y.terms.back().first > r.order())
        precision = r.order();
      std::map<long, RingElement> acc;
      for (const auto& [ex, cx] : x.terms) {
        if (ex + vy > cap) break;
        for (const auto& [ey, cy] : y.terms) {
          if (ex + ey > cap) break;
          RingElement p = cx * cy;
          auto it = acc.find(ex + ey);
          if (it == acc.end())
            acc.emplace(ex + ey, std::move(p));
          else
            it->second += p;
        }
      }
      return make_series(r, SeriesTerms(acc.begin(), acc.end()), precision);
    }
    case RingKind::polynomial: {
      PolyMap acc;
      for (const auto& [ex, cx] : poly_value(a).terms)
        for (const auto& [ey, cy] : poly_value(b).terms) {
          std::vector<int> e(ex.size());
          for (std::size_t k = 0; k < e.size(); ++k) e[k] = ex[k] + ey[k];
          RingElement p = cx * cy;
          auto it = acc.find(e);
          if (it == acc.end())
            acc.emplace(std::move(e), std::move(p));
          else
            it->second += p;
        }
      return make_polynomial(r, std::move(acc));
    }
    default:
      return scalar(r, Rational(scalar_value(a) * scalar_value(b)));
  }
}

std::optional<RingElement> RingData::series_inverse(const RingElement& a) {
  const Ring& r = a.ring();
  const auto& s = series_value(a);
  if (s.terms.empty()) return std::nullopt;
  const long v = s.terms.front().first;
  if (r.kind() == RingKind::power_series && v != 0) return std::nullopt;
  auto lead_inv = s.terms.front().second.try_inverse();
  if (!lead_inv) return std::nullopt;
  if (r.kind() == RingKind::laurent && -v < -static_cast<long>(r.tail()))
    throw TailOverflow("inverse of an element of valuation " + std::to_string(v) +
                       " leaves the tail of " + r.describe());
  if (s.terms.size() == 1 && s.precision >= kExactPrecision)
    return make_series(r, {{-v, *lead_inv}}, kExactPrecision);
  long precision = s.precision >= kExactPrecision ? r.order()
                                                  : std::min<long>(r.order(), s.precision - 2 * v);
  if (r.kind() == RingKind::power_series) precision = r.order();
  // Relative recurrence: a = q^v (u_0 + u_1 q + ...), b_n = -u_0^{-1} sum u_k b_{n-k}.
  const long steps = precision + v;
  std::vector<RingElement> u;
  for (long k = 0; k <= steps; ++k) u.push_back(a.coefficient(v + k));
  std::vector<RingElement> b;
  b.reserve(steps + 1);
  for (long n = 0; n <= steps; ++n) {
    if (n == 0) {
      b.push_back(*lead_inv);
      continue;
    }
    RingElement acc = r.base().zero();
    for (long k = 1; k <= n; ++k)
      if (!u[k].is_zero()) acc += u[k] * b[n - k];
    b.push_back(-(*lead_inv * acc));
  }
  SeriesTerms terms;
  for (long n = 0; n <= steps; ++n) terms.emplace_back(n - v, b[n]);
  return make_series(r, std::move(terms), precision);
}

std::optional<RingElement> RingData::polynomial_inverse(const RingElement& a) {
  const Ring& r = a.ring();
  const RingData& rd = *r.data_;
  if (a.is_zero()) return std::nullopt;
  // Unit constant plus nilpotent part.
  RingElement c = a.constant_coefficient();
  if (auto c_inv = c.try_inverse()) {
    RingElement n = a - r.coerce(c);
    if (auto idx = nilpotency_index(n, 64)) {
      RingElement ci = r.coerce(*c_inv);
      RingElement t = n * ci;  // a = c (1 + t)
      RingElement sum = r.one();
      RingElement p = r.one();
      for (int k = 1; k < *idx; ++k) {
        p = -(p * t);
        sum += p;
      }
      return sum * ci;
    }
  }
  // Finite rank over a rational-valued base: solve a * b = 1 over Q.
  const RingKind bk = r.base().kind();
  if (bk != RingKind::integers && bk != RingKind::rationals) return std::nullopt;
  for (int deg : rd.relation_degree)
    if (deg == 0) return std::nullopt;
  std::vector<std::vector<int>> basis{std::vector<int>(rd.generators.size(), 0)};
  for (std::size_t g = 0; g < rd.generators.size(); ++g) {
    std::vector<std::vector<int>> next;
    for (const auto& e : basis)
      for (int k = 0; k < rd.relation_degree[g]; ++k) {
        auto e2 = e;
        e2[g] = k;
        next.push_back(std::move(e2));
      }
    basis = std::move(next);
  }
  std::sort(basis.begin(), basis.end());
  const std::size_t n = basis.size();
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[basis[i]] = i;
  // Column j holds a * basis[j].
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, 0));
  for (std::size_t j = 0; j < n; ++j) {
    RingElement prod = a * r.polynomial_element({{basis[j], r.base().one()}});
    for (const auto& [e, coeff] : poly_value(prod).terms) m[index.at(e)][j] = coeff.rational();
  }
  m[index.at(std::vector<int>(rd.generators.size(), 0))][n] = 1;
  for (std::size_t col = 0, row = 0; col < n; ++col, ++row) {
    std::size_t piv = row;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[row]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t k = col; k <= n; ++k) m[i][k] -= f * m[row][k];
    }
  }
  std::vector<std::pair<std::vector<int>, RingElement>> terms;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i][n] == 0) continue;
    try {
      terms.emplace_back(basis[i], r.base().from_rational(m[i][n]));
    } catch (const RingMismatch&) {
      return std::nullopt;
    }
  }
  return r.polynomial_element(std::move(terms));
}

std::optional<RingElement> RingData::inverse(const RingElement& a) {
  const Ring& r = a.ring();
  switch (r.kind()) {
    case RingKind::rationals:
      if (scalar_value(a) == 0) return std::nullopt;
      return scalar(r, Rational(1 / scalar_value(a)));
    case RingKind::integers: {
      const Rational& v = scalar_value(a);
      if (v == 0 || strip_primes(v.get_num(), r.inverted_primes()) != 1) return std::nullopt;
      return scalar(r, Rational(1 / v));
    }
    case RingKind::integers_mod: {
      Integer inv;
      if (mpz_invert(inv.get_mpz_t(), scalar_value(a).get_num_mpz_t(), r.modulus().get_mpz_t()) ==
          0)
        return std::nullopt;
      return scalar(r, Rational(mod_normalize(inv, r.modulus())));
    }
    case RingKind::quadratic: {
      const auto& q = quad_value(a);
      Rational norm = q.a * q.a - r.quadratic_d() * q.b * q.b;
      if (norm == 0) return std::nullopt;
      return quad(r, q.a / norm, -q.b / norm);
    }
    case RingKind::power_series:
    case RingKind::laurent:
      return series_inverse(a);
    case RingKind::polynomial:
      return polynomial_inverse(a);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Ring element factories

RingElement Ring::zero() const {
  switch (kind()) {
    case RingKind::quadratic:
      return RingData::quad(*this, 0, 0);
    case RingKind::power_series:
    case RingKind::laurent:
      return RingData::make_series(*this, {}, kExactPrecision);
    case RingKind::polynomial:
      return RingData::make_polynomial(*this, {});
    default:
      return RingData::scalar(*this, 0);
  }
}

RingElement Ring::one() const { return from_integer(1); }

RingElement Ring::from_integer(long value) const { return from_integer(Integer(value)); }

RingElement Ring::from_integer(const Integer& value) const {
  switch (kind()) {
    case RingKind::integers:
    case RingKind::rationals:
      return RingData::scalar(*this, Rational(value));
    case RingKind::integers_mod:
      return RingData::scalar(*this, Rational(mod_normalize(value, modulus())));
    case RingKind::quadratic:
      return RingData::quad(*this, Rational(value), 0);
    case RingKind::power_series:
    case RingKind::laurent:
      return RingData::make_series(*this, {{0, base().from_integer(value)}}, kExactPrecision);
    case RingKind::polynomial: {
      RingData::PolyMap acc;
      acc.emplace(std::vector<int>(generators().size(), 0), base().from_integer(value));
      return RingData::make_polynomial(*this, std::move(acc));
    }
  }
  throw InvalidArgument("unreachable");
}

RingElement Ring::from_rational(const Rational& raw) const {
  Rational value = raw;
  value.canonicalize();
  switch (kind()) {
    case RingKind::rationals:
      return RingData::scalar(*this, value);
    case RingKind::integers:
      if (strip_primes(value.get_den(), inverted_primes()) != 1)
        throw RingMismatch(to_string(value) + " is not an element of " + describe());
      return RingData::scalar(*this, value);
    case RingKind::integers_mod: {
      Integer inv;
      if (mpz_invert(inv.get_mpz_t(), value.get_den_mpz_t(), modulus().get_mpz_t()) == 0)
        throw RingMismatch(to_string(value) + " has no image in " + describe());
      return RingData::scalar(*this, Rational(mod_normalize(value.get_num() * inv, modulus())));
    }
    case RingKind::quadratic:
      return RingData::quad(*this, value, 0);
    case RingKind::power_series:
    case RingKind::laurent:
      return RingData::make_series(*this, {{0, base().from_rational(value)}}, kExactPrecision);
    case RingKind::polynomial: {
      RingData::PolyMap acc;
      acc.emplace(std::vector<int>(generators().size(), 0), base().from_rational(value));
      return RingData::make_polynomial(*this, std::move(acc));
    }
  }
  throw InvalidArgument("unreachable");
}

RingElement Ring::sqrt_d() const {
  if (kind() != RingKind::quadratic) throw InvalidArgument(describe() + " is not quadratic");
  return RingData::quad(*this, 0, 1);
}

RingElement Ring::parameter_element() const { return monomial(base().one(), 1); }

RingElement Ring::monomial(const RingElement& coeff, long exponent) const {
  if (!is_series()) throw InvalidArgument(describe() + " is not a series ring");
  return RingData::make_series(*this, {{exponent, base().coerce(coeff)}}, kExactPrecision);
}

RingElement Ring::series_element(std::vector<std::pair<long, RingElement>> terms,
                                 long precision) const {
  if (!is_series()) throw InvalidArgument(describe() + " is not a series ring");
  std::map<long, RingElement> acc;
  for (auto& [e, c] : terms) {
    RingElement cc = base().coerce(c);
    auto it = acc.find(e);
    if (it == acc.end())
      acc.emplace(e, std::move(cc));
    else
      it->second += cc;
  }
  return RingData::make_series(*this, RingData::SeriesTerms(acc.begin(), acc.end()), precision);
}

RingElement Ring::generator(std::size_t index) const {
  if (kind() != RingKind::polynomial) throw InvalidArgument(describe() + " has no generators");
  if (index >= generators().size()) throw InvalidArgument("generator index out of range");
  std::vector<int> e(generators().size(), 0);
  e[index] = 1;
  RingData::PolyMap acc;
  acc.emplace(std::move(e), base().one());
  return RingData::make_polynomial(*this, std::move(acc));
}

RingElement Ring::generator(const std::string& name) const {
  return generator(generator_index(name));
}

RingElement Ring::polynomial_element(
    std::vector<std::pair<std::vector<int>, RingElement>> terms) const {
  if (kind() != RingKind::polynomial) throw InvalidArgument(describe() + " is not polynomial");
  RingData::PolyMap acc;
  for (auto& [e, c] : terms) {
    if (e.size() != generators().size()) throw InvalidArgument("exponent length mismatch");
    for (int x : e)
      if (x < 0) throw InvalidArgument("negative exponent in polynomial ring");
    RingElement cc = base().coerce(c);
    auto it = acc.find(e);
    if (it == acc.end())
      acc.emplace(e, std::move(cc));
    else
      it->second += cc;
  }
  return RingData::make_polynomial(*this, std::move(acc));
}

// ---------------------------------------------------------------------------
// Coercion and localization

bool Ring::can_coerce(const RingElement& x) const {
  try {
    coerce(x);
    return true;
  } catch (const RingMismatch&) {
    return false;
  }
}

RingElement Ring::coerce(const RingElement& x) const {
  const Ring& src = x.ring();
  if (src == *this) return x;
  auto mismatch = [&] {
    return RingMismatch("no canonical map from " + src.describe() + " to " + describe());
  };
  switch (kind()) {
    case RingKind::integers:
    case RingKind::rationals:
    case RingKind::quadratic:
      if (src.kind() == RingKind::integers || src.kind() == RingKind::rationals)
        return from_rational(x.rational());
      if (src.kind() == RingKind::quadratic && x.irrational() == 0 &&
          kind() != RingKind::quadratic)
        return from_rational(x.rational());
      if (src.kind() == RingKind::quadratic && kind() == RingKind::quadratic && x.irrational() == 0)
        return from_rational(x.rational());
      throw mismatch();
    case RingKind::integers_mod:
      if (src.kind() == RingKind::integers || src.kind() == RingKind::rationals)
        return from_rational(x.rational());
      if (src.kind() == RingKind::integers_mod &&
          mpz_divisible_p(src.modulus().get_mpz_t(), modulus().get_mpz_t()))
        return from_integer(x.rational().get_num());
      throw mismatch();
    case RingKind::power_series:
    case RingKind::laurent: {
      if (src.is_series() && src.parameter() == parameter()) {
        if (kind() == RingKind::power_series && src.kind() == RingKind::laurent &&
            !x.is_zero() && x.valuation() < 0)
          throw mismatch();
        RingData::SeriesTerms terms;
        for (const auto& [e, c] : x.series_terms()) terms.emplace_back(e, base().coerce(c));
        long prec = x.precision();
        if (src.kind() == RingKind::power_series) prec = src.order();
        if (src.kind() == RingKind::power_series && src.order() >= order())
          prec = kExactPrecision;  // truncation to this ring happens below
        if (src.kind() == RingKind::power_series && src.order() < order())
          prec = src.order();
        if (kind() == RingKind::power_series && prec < order())
          throw TruncationError("coercion from " + src.describe() + " loses precision");
        return RingData::make_series(*this, std::move(terms), prec);
      }
      return RingData::make_series(*this, {{0, base().coerce(x)}}, kExactPrecision);
    }
    case RingKind::polynomial: {
      if (src.kind() == RingKind::polynomial && src.generators().size() == generators().size()) {
        bool same_names = true;
        for (std::size_t i = 0; i < generators().size(); ++i)
          same_names = same_names && src.generators()[i].name == generators()[i].name &&
                       src.generators()[i].relation.size() == generators()[i].relation.size();
        if (same_names) {
          std::vector<std::pair<std::vector<int>, RingElement>> terms;
          for (const auto& [e, c] : x.polynomial_terms()) terms.emplace_back(e, base().coerce(c));
          return polynomial_element(std::move(terms));
        }
      }
      RingData::PolyMap acc;
      acc.emplace(std::vector<int>(generators().size(), 0), base().coerce(x));
      return RingData::make_polynomial(*this, std::move(acc));
    }
  }
  throw mismatch();
}

namespace {

std::optional<Rational> constant_rational(const RingElement& x) {
  const Ring& r = x.ring();
  switch (r.kind()) {
    case RingKind::integers:
    case RingKind::rationals:
      return x.rational();
    case RingKind::power_series:
    case RingKind::laurent:
      if (x.series_terms().size() > 1 ||
          (x.series_terms().size() == 1 && x.series_terms()[0].first != 0))
        return std::nullopt;
      return x.series_terms().empty() ? std::optional<Rational>(0)
                                      : constant_rational(x.series_terms()[0].second);
    case RingKind::polynomial: {
      const auto& t = x.polynomial_terms();
      if (t.empty()) return Rational(0);
      if (t.size() > 1) return std::nullopt;
      for (int e : t[0].first)
        if (e != 0) return std::nullopt;
      return constant_rational(t[0].second);
    }
    default:
      return std::nullopt;
  }
}

Ring relocalize(const Ring& r, const std::vector<unsigned long>& primes) {
  switch (r.kind()) {
    case RingKind::integers: {
      std::vector<unsigned long> all = r.inverted_primes();
      all.insert(all.end(), primes.begin(), primes.end());
      return Ring::integers(all);
    }
    case RingKind::rationals:
    case RingKind::quadratic:
      return r;
    case RingKind::integers_mod:
      for (unsigned long p : primes)
        if (mpz_divisible_ui_p(r.modulus().get_mpz_t(), p))
          throw InvalidArgument("localizing " + r.describe() + " at " + std::to_string(p) +
                                " gives the zero ring");
      return r;
    case RingKind::power_series:
      return Ring::power_series(relocalize(r.base(), primes), r.parameter(), r.order());
    case RingKind::laurent:
      return Ring::laurent(relocalize(r.base(), primes), r.parameter(), r.order(), r.tail());
    case RingKind::polynomial: {
      Ring nb = relocalize(r.base(), primes);
      std::vector<Generator> gens;
      for (const auto& g : r.generators()) {
        Generator ng{g.name, {}};
        for (const auto& c : g.relation) ng.relation.push_back(nb.coerce(c));
        gens.push_back(std::move(ng));
      }
      return Ring::polynomial(nb, gens);
    }
  }
  return r;
}

}  // namespace

Ring Ring::localized_at(const RingElement& element) const {
  auto v = constant_rational(element);
  if (!v || *v == 0)
    throw InvalidArgument("can only localize at a nonzero integer constant, got " +
                          element.to_string());
  auto primes = prime_factors(v->get_num());
  auto den_primes = prime_factors(v->get_den());
  primes.insert(primes.end(), den_primes.begin(), den_primes.end());
  return relocalize(*this, primes);
}

// ---------------------------------------------------------------------------
// RingElement members

RingElement::RingElement() : ring_(), payload_(Rational(0)) {}

bool RingElement::is_zero() const {
  switch (ring_.kind()) {
    case RingKind::quadratic: {
      const auto& q = std::get<QuadraticValue>(payload_);
      return q.a == 0 && q.b == 0;
    }
    case RingKind::power_series:
    case RingKind::laurent:
      return std::get<SeriesValue>(payload_).terms.empty();
    case RingKind::polynomial:
      return std::get<PolynomialValue>(payload_).terms.empty();
    default:
      return std::get<Rational>(payload_) == 0;
  }
}

bool RingElement::is_exact_zero() const {
  if (!is_zero()) return false;
  if (ring_.kind() == RingKind::laurent)
    return std::get<SeriesValue>(payload_).precision >= kExactPrecision;
  return true;
}

bool RingElement::is_one() const { return *this == ring_.one(); }

bool RingElement::is_unit() const { return try_inverse().has_value(); }

const Rational& RingElement::rational() const {
  if (ring_.kind() == RingKind::quadratic) return std::get<QuadraticValue>(payload_).a;
  if (!ring_.is_scalar()) throw InvalidArgument(ring_.describe() + " is not a scalar ring");
  return std::get<Rational>(payload_);
}

const Rational& RingElement::irrational() const {
  if (ring_.kind() != RingKind::quadratic)
    throw InvalidArgument(ring_.describe() + " is not a quadratic field");
  return std::get<QuadraticValue>(payload_).b;
}

long RingElement::valuation() const {
  const auto& s = std::get<SeriesValue>(payload_);
  return s.terms.empty() ? LONG_MAX : s.terms.front().first;
}

long RingElement::precision() const {
  if (!ring_.is_series()) return kExactPrecision;
  return std::get<SeriesValue>(payload_).precision;
}

RingElement RingElement::coefficient(long exponent) const {
  if (!ring_.is_series()) throw InvalidArgument(ring_.describe() + " is not a series ring");
  const auto& s = std::get<SeriesValue>(payload_);
  if (exponent > std::min<long>(s.precision, ring_.order()))
    throw TruncationError("coefficient of " + ring_.parameter() + "^" + std::to_string(exponent) +
                          " is beyond the known precision");
  auto it = std::lower_bound(s.terms.begin(), s.terms.end(), exponent,
                             [](const auto& t, long e) { return t.first < e; });
  if (it != s.terms.end() && it->first == exponent) return it->second;
  return ring_.base().zero();
}

const std::vector<std::pair<long, RingElement>>& RingElement::series_terms() const {
  if (!ring_.is_series()) throw InvalidArgument(ring_.describe() + " is not a series ring");
  return std::get<SeriesValue>(payload_).terms;
}

const std::vector<std::pair<std::vector<int>, RingElement>>& RingElement::polynomial_terms()
    const {
  if (ring_.kind() != RingKind::polynomial)
    throw InvalidArgument(ring_.describe() + " is not a polynomial ring");
  return std::get<PolynomialValue>(payload_).terms;
}

RingElement RingElement::coefficient(const std::vector<int>& exponent) const {
  for (const auto& [e, c] : polynomial_terms())
    if (e == exponent) return c;
  return ring_.base().zero();
}

RingElement RingElement::constant_coefficient() const {
  switch (ring_.kind()) {
    case RingKind::power_series:
    case RingKind::laurent: {
      const auto& s = std::get<SeriesValue>(payload_);
      for (const auto& [e, c] : s.terms)
        if (e == 0) return c;
      return ring_.base().zero();
    }
    case RingKind::polynomial:
      return coefficient(std::vector<int>(ring_.generators().size(), 0));
    default:
      return *this;
  }
}

RingElement RingElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  RingElement result = ring_.one();
  RingElement base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

std::optional<RingElement> RingElement::try_inverse() const { return RingData::inverse(*this); }

RingElement RingElement::inverse() const {
  auto inv = try_inverse();
  if (!inv) throw NotAUnit(to_string() + " is not a unit of " + ring_.describe());
  return *inv;
}

RingElement operator+(const RingElement& a, const RingElement& b) {
  return RingData::add(a, b, false);
}
RingElement operator-(const RingElement& a, const RingElement& b) {
  return RingData::add(a, b, true);
}
RingElement operator*(const RingElement& a, const RingElement& b) { return RingData::mul(a, b); }
RingElement operator-(const RingElement& a) { return RingData::neg(a); }

bool operator==(const RingElement& a, const RingElement& b) {
  if (a.ring() != b.ring()) return false;
  return (a - b).is_zero();
}

RingElement ring_arith(ArithOp op, const RingElement& a, const RingElement& b) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
    case ArithOp::neg:
      return -a;
  }
  throw InvalidArgument("unknown arithmetic operation");
}

RingElement invert_unit(const RingElement& a) { return a.inverse(); }

std::optional<int> nilpotency_index(const RingElement& a, int bound) {
  RingElement p = a;
  for (int n = 1; n <= bound; ++n) {
    if (p.is_exact_zero()) return n;
    if (n < bound) p *= a;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_rational_like(const Ring& r) {
  return r.kind() == RingKind::integers || r.kind() == RingKind::rationals ||
         r.kind() == RingKind::integers_mod;
}

// Appends "coeff*monomial" to `out` with canonical sign handling.
void append_term(std::string& out, const RingElement& coeff, const std::string& monomial) {
  const bool first = out.empty();
  if (is_rational_like(coeff.ring())) {
    Rational v = coeff.rational();
    const bool negative = v < 0 && coeff.ring().kind() != RingKind::integers_mod;
    if (negative) v = -v;
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    if (monomial.empty()) {
      out += to_string(v);
    } else {
      if (v != 1) out += to_string(v) + "*";
      out += monomial;
    }
    return;
  }
  std::string c = coeff.to_string();
  if (!first) out += " + ";
  if (monomial.empty()) {
    out += first ? c : "(" + c + ")";
  } else if (coeff.is_one()) {
    out += monomial;
  } else {
    out += "(" + c + ")*" + monomial;
  }
}

}  // namespace

std::string RingElement::to_string() const {
  switch (ring_.kind()) {
    case RingKind::integers:
    case RingKind::rationals:
    case RingKind::integers_mod:
      return fgc::to_string(std::get<Rational>(payload_));
    case RingKind::quadratic: {
      const auto& q = std::get<QuadraticValue>(payload_);
      const std::string s =
          ring_.quadratic_d() == -1 ? "i" : "sqrt(" + std::to_string(ring_.quadratic_d()) + ")";
      std::string out;
      Ring rat = Ring::rationals();
      if (q.a != 0) append_term(out, rat.from_rational(q.a), "");
      if (q.b != 0) append_term(out, rat.from_rational(q.b), s);
      return out.empty() ? "0" : out;
    }
    case RingKind::power_series:
    case RingKind::laurent: {
      const auto& s = std::get<SeriesValue>(payload_);
      std::string out;
      const std::string& p = ring_.parameter();
      for (const auto& [e, c] : s.terms) {
        std::string mono = e == 0 ? "" : (e == 1 ? p : p + "^" + std::to_string(e));
        append_term(out, c, mono);
      }
      if (ring_.kind() == RingKind::laurent && s.precision < kExactPrecision &&
          s.precision < ring_.order()) {
        out += out.empty() ? "" : " + ";
        out += "O(" + p + "^" + std::to_string(s.precision + 1) + ")";
      }
      return out.empty() ? "0" : out;
    }
    case RingKind::polynomial: {
      std::string out;
      for (const auto& [e, c] : std::get<PolynomialValue>(payload_).terms) {
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
          if (e[i] == 0) continue;
          if (!mono.empty()) mono += "*";
          mono += ring_.generators()[i].name;
          if (e[i] != 1) mono += "^" + std::to_string(e[i]);
        }
        append_term(out, c, mono);
      }
      return out.empty() ? "0" : out;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ExpressionParser {
 public:
  ExpressionParser(const Ring& ring, const std::string& text) : ring_(ring), text_(text) {}

  RingElement parse() {
    RingElement v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("cannot parse '" + text_ + "' in " + ring_.describe() + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RingElement expr() {
    skip_ws();
    RingElement v = ring_.zero();
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    RingElement t = term();
    v = negate ? -t : t;
    while (true) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        break;
      }
    }
    return v;
  }

  RingElement term() {
    RingElement v = factor();
    while (true) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        v *= factor().inverse();
      } else {
        break;
      }
    }
    return v;
  }

  long integer_literal() {
    skip_ws();
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    long v = std::stol(text_.substr(start, pos_ - start));
    return neg ? -v : v;
  }

  RingElement factor() {
    RingElement v = atom();
    if (accept('^')) {
      skip_ws();
      bool paren = accept('(');
      long e = integer_literal();
      if (paren && !accept(')')) fail("expected ')'");
      v = v.pow(e);
    }
    return v;
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  static RingElement resolve(const Ring& r, const std::string& name) {
    switch (r.kind()) {
      case RingKind::power_series:
      case RingKind::laurent:
        if (name == r.parameter()) return r.parameter_element();
        return r.coerce(resolve(r.base(), name));
      case RingKind::polynomial:
        for (std::size_t i = 0; i < r.generators().size(); ++i)
          if (r.generators()[i].name == name) return r.generator(i);
        return r.coerce(resolve(r.base(), name));
      case RingKind::quadratic:
        if (name == "i" && r.quadratic_d() == -1) return r.sqrt_d();
        break;
      default:
        break;
    }
    throw ParseError("unknown symbol '" + name + "' in " + r.describe());
  }

  static RingElement resolve_sqrt(const Ring& r, long d) {
    switch (r.kind()) {
      case RingKind::power_series:
      case RingKind::laurent:
      case RingKind::polynomial:
        return r.coerce(resolve_sqrt(r.base(), d));
      case RingKind::quadratic:
        if (r.quadratic_d() == d) return r.sqrt_d();
        break;
      default:
        break;
    }
    throw ParseError("sqrt(" + std::to_string(d) + ") is not in " + r.describe());
  }

  RingElement atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RingElement v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return ring_.from_integer(Integer(text_.substr(start, pos_ - start)));
    }
    std::string name = identifier();
    if (name.empty()) fail("unexpected '" + std::string(1, c) + "'");
    if (name == "sqrt") {
      if (!accept('(')) fail("expected '(' after sqrt");
      long d = integer_literal();
      if (!accept(')')) fail("expected ')'");
      return resolve_sqrt(ring_, d);
    }
    if (name == "O") {
      if (!ring_.is_series()) fail("O(...) needs a series ring");
      if (!accept('(')) fail("expected '(' after O");
      if (identifier() != ring_.parameter()) fail("O(...) must use the series parameter");
      long e = 1;
      if (accept('^')) e = integer_literal();
      if (!accept(')')) fail("expected ')'");
      return RingData::make_series(ring_, {}, e - 1);
    }
    return resolve(ring_, name);
  }

  const Ring& ring_;
  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

RingElement Ring::parse_element(const std::string& text) const {
  return ExpressionParser(*this, text).parse();
}

namespace {

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string text) : text_(std::move(text)) {
    text_.erase(std::remove_if(text_.begin(), text_.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                text_.end());
  }

  Ring parse() {
    Ring r = ring();
    if (pos_ != text_.size()) fail("trailing characters");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("bad ring descriptor '" + text_ + "': " + msg);
  }

  bool consume(const std::string& s) {
    if (text_.compare(pos_, s.size(), s) == 0) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& s) {
    if (!consume(s)) fail("expected '" + s + "'");
  }

  long number() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stol(text_.substr(start, pos_ - start));
  }

  std::string name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  // Text up to the next ',' or ')' at nesting depth zero.
  std::string balanced() {
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  Ring ring() {
    if (consume("QQ(i)")) return Ring::gaussian_rationals();
    if (consume("QQ(sqrt(")) {
      long d = number();
      expect("))");
      return Ring::quadratic(d);
    }
    if (consume("QQ")) return Ring::rationals();
    if (consume("ZZ/")) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a modulus");
      return Ring::integers_mod(Integer(text_.substr(start, pos_ - start)));
    }
    if (consume("ZZ")) {
      std::vector<unsigned long> primes;
      if (consume("[")) {
        do {
          expect("1/");
          primes.push_back(static_cast<unsigned long>(number()));
        } while (consume(","));
        expect("]");
      }
      return Ring::integers(primes);
    }
    if (consume("series(")) {
      Ring base = ring();
      expect(",");
      std::string p = name();
      expect(",");
      long order = number();
      expect(")");
      return Ring::power_series(base, p, static_cast<int>(order));
    }
    if (consume("laurent(")) {
      Ring base = ring();
      expect(",");
      std::string p = name();
      expect(",");
      long order = number();
      expect(",");
      long tail = number();
      expect(")");
      return Ring::laurent(base, p, static_cast<int>(order), static_cast<int>(tail));
    }
    if (consume("poly(")) {
      Ring base = ring();
      std::vector<Generator> gens;
      while (consume(",")) {
        Generator g{name(), {}};
        if (consume(":")) {
          std::string rel = balanced();
          Ring free = Ring::polynomial(base, {Generator{g.name, {}}});
          RingElement p = free.parse_element(rel);
          int degree = 0;
          for (const auto& [e, c] : p.polynomial_terms()) degree = std::max(degree, e[0]);
          if (degree == 0) fail("relation for " + g.name + " has degree zero");
          if (!p.coefficient(std::vector<int>{degree}).is_one())
            fail("relation for " + g.name + " is not monic");
          for (int j = 0; j < degree; ++j) g.relation.push_back(p.coefficient(std::vector<int>{j}));
        }
        gens.push_back(std::move(g));
      }
      expect(")");
      return Ring::polynomial(base, gens);
    }
    fail("unknown ring");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ring Ring::parse(const std::string& descriptor) { return DescriptorParser(descriptor).parse(); }

}  // namespace fgc
