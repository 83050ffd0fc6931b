// SPDX-License-Identifier: Apache-2.0
#include "fgc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "fgc/errors.hpp"
#include "fgc/genus.hpp"
#include "fgc/prospectrum.hpp"
#include "fgc/quotient.hpp"
#include "fgc/tate.hpp"

namespace fgc::cli {

using json = nlohmann::ordered_json;

// Documents.

SeriesDocument to_document(const MultiSeries& f) {
  SeriesDocument doc{f.vars(), f.trunc(), f.ring().describe(), {}};
  for (const auto& [e, c] : f.terms()) doc.terms.push_back({e, c.to_string()});
  return doc;
}

MultiSeries from_document(const SeriesDocument& doc) {
  Ring R = Ring::parse(doc.coeff_ring);
  MultiSeries::Terms terms;
  for (const auto& t : doc.terms) {
    if (t.exponents.size() != doc.vars.size())
      throw ParseError("term with " + std::to_string(t.exponents.size()) + " exponents for " +
                       std::to_string(doc.vars.size()) + " variables");
    if (std::any_of(t.exponents.begin(), t.exponents.end(), [](int k) { return k < 0; }))
      throw ParseError("negative exponent in a series document");
    if (!terms.emplace(t.exponents, R.parse_element(t.coeff)).second)
      throw ParseError("repeated exponent in a series document");
  }
  return MultiSeries(R, doc.vars, doc.trunc, std::move(terms));
}

namespace {

json document_json(const SeriesDocument& doc) {
  json terms = json::array();
  for (const auto& t : doc.terms) terms.push_back(json{{"exponents", t.exponents}, {"coeff", t.coeff}});
  return json{{"vars", doc.vars}, {"trunc", doc.trunc}, {"coeff_ring", doc.coeff_ring}, {"terms", terms}};
}

}  // namespace

std::string print_document(const SeriesDocument& doc) { return document_json(doc).dump(2); }

SeriesDocument parse_document(const std::string& text) {
  try {
    json j = json::parse(text);
    SeriesDocument doc;
    doc.vars = j.at("vars").get<std::vector<std::string>>();
    doc.trunc = j.at("trunc").get<int>();
    doc.coeff_ring = j.at("coeff_ring").get<std::string>();
    for (const auto& t : j.at("terms"))
      doc.terms.push_back({t.at("exponents").get<std::vector<int>>(), t.at("coeff").get<std::string>()});
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad series document: ") + e.what());
  }
}

MultiSeries parse_series(const std::string& text, const Ring& ring,
                         const std::vector<std::string>& vars, int trunc) {
  std::vector<Generator> gens;
  for (const auto& v : vars) gens.push_back(Generator{v, {}});
  Ring P = Ring::polynomial(ring, gens);
  RingElement p = P.parse_element(text);
  MultiSeries::Terms terms;
  for (const auto& [e, c] : p.polynomial_terms()) {
    int deg = 0;
    for (int k : e) deg += k;
    if (deg <= trunc) terms.emplace(e, c);
  }
  return MultiSeries(ring, vars, trunc, std::move(terms));
}

ChernData parse_manifold(const std::string& text) {
  if (text.empty() || text.front() != '{') return ChernData::parse(text);
  try {
    json j = json::parse(text);
    ChernData X;
    for (const auto& b : j.at("blocks")) {
      ChernBlock blk;
      blk.top_power = b.at("top_power").get<int>();
      const json& d = b.value("degree", json(1));
      blk.degree = d.is_string() ? Integer(d.get<std::string>()) : Integer(d.get<long>());
      for (const auto& r : b.at("roots"))
        blk.roots.push_back(ChernRoot{r.value("weight", 1L), r.value("multiplicity", 1)});
      if (blk.top_power < 0) throw ParseError("negative top power");
      X.blocks.push_back(std::move(blk));
    }
    return X;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad manifold JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad manifold JSON: ") + e.what());
  }
}

namespace {

struct Options {
  int trunc = 6;
  int qorder = 6;
  int N = 3;
  std::optional<int> bound;
  std::optional<std::string> ring;
  std::string format = "text";
  std::string law = "gm";
  long k = 1;
  int n = 1;
  std::optional<int> cutoff;
  std::optional<std::string> r;
  std::optional<std::string> series;
  std::optional<std::string> theta;
  std::optional<std::string> qhat;
  std::optional<std::string> localize;
  std::optional<std::string> basis;
  std::optional<std::string> bundle;
  std::string points;
  std::string manifold = "cp1";
  std::string norm = "renormalized";
  std::string form = "sigma";
  std::string g = "0", a = "0", g2 = "0", a2 = "0";
  long order_bound = 64;
  int samples = 100;
  unsigned seed = 1;
  bool unlocalized = false;
  bool closed = false;
  bool in_L = false;
};

struct Field {
  std::string name;
  std::string text;
  json value;
};

struct Output {
  std::vector<Field> fields;
  std::optional<std::string> failure;

  void add(std::string name, std::string text, json value) {
    fields.push_back({std::move(name), std::move(text), std::move(value)});
  }
  void add(std::string name, const MultiSeries& f) {
    add(std::move(name), f.to_string(), document_json(to_document(f)));
  }
  void add(std::string name, const RingElement& c) {
    add(std::move(name), c.to_string(), json{{"coeff_ring", c.ring().describe()}, {"value", c.to_string()}});
  }
  void add(std::string name, bool b) { add(std::move(name), b ? "true" : "false", json(b)); }
  void add(std::string name, long v) { add(std::move(name), std::to_string(v), json(v)); }
  void add(std::string name, const LSeries& s) {
    json terms = json::array();
    for (const auto& [b, c] : s.coefficients())
      if (!c.is_zero()) terms.push_back(json{{"exponents", {b}}, {"coeff", c.to_string()}});
    json j{{"vars", {"L"}}, {"coeff_ring", s.ring().describe()}, {"terms", terms}};
    if (!s.is_exact()) j["absent_precision"] = json{{"base", s.base_precision()}, {"slope", s.slope()}};
    add(std::move(name), s.to_string(), j);
  }
  void add(std::string name, const TatePoint& p) {
    std::string a = p.a.get_str();
    add(std::move(name), "(" + p.g.to_string() + ", " + a + ")",
        json{{"coeff_ring", p.g.ring().describe()}, {"g", p.g.to_string()}, {"a", a}});
  }
  void require(bool ok, const std::string& what) {
    if (!ok && !failure) failure = what;
  }
};

Rational parse_rational(const std::string& s) {
  try {
    Rational r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long parse_long(const std::string& s, long fallback) {
  if (s.empty()) return fallback;
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw ParseError("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + s + "'");
  }
}

/// `root:scale:weight:multiplicity` blocks separated by commas; trailing
/// fields default to 1, 0, 1 and an empty root is a trivial summand.
EqBundle parse_bundle(const std::string& s) {
  EqBundle V;
  for (const auto& part : split(s, ',')) {
    auto f = split(part, ':');
    if (f.empty() || f.size() > 4) throw ParseError("bad bundle block '" + part + "'");
    EqBlock b;
    b.root = f[0];
    b.scale = f.size() > 1 ? parse_long(f[1], 1) : 1;
    b.weight = f.size() > 2 ? parse_long(f[2], 0) : 0;
    b.multiplicity = static_cast<int>(f.size() > 3 ? parse_long(f[3], 1) : 1);
    if (b.root.empty()) b.scale = 0;
    V.blocks.push_back(b);
  }
  return V;
}

Ring ring_of(const Options& o, const std::string& fallback = "QQ") {
  return Ring::parse(o.ring.value_or(fallback));
}

FormalGroupLaw make_law(const Options& o, const Ring& R, int trunc) {
  if (o.law == "ga") return FormalGroupLaw::additive(R, trunc);
  if (o.law == "gm") return FormalGroupLaw::multiplicative(R, trunc);
  if (o.law.rfind("log:", 0) == 0)
    return FormalGroupLaw::from_log(parse_series(o.law.substr(4), R, {"x"}, trunc));
  throw ParseError("unknown law '" + o.law + "' (ga, gm or log:<series in x>)");
}

EquivariantContext make_context(const Options& o, int trunc, int bound) {
  const bool loc = !o.unlocalized;
  if (o.law == "ga") return EquivariantContext::additive(trunc, o.qorder, loc, bound);
  if (o.law == "gm") return EquivariantContext::multiplicative(trunc, o.qorder, loc, bound);
  if (!o.ring || !o.qhat)
    throw InvalidArgument("a custom law needs --ring and --qhat for its coefficients");
  Ring R = Ring::parse(*o.ring);
  return EquivariantContext::custom(make_law(o, R, trunc), R, R.parse_element(*o.qhat), loc, bound);
}

LoopNormalization parse_norm(const std::string& s) {
  if (s == "renormalized") return LoopNormalization::renormalized;
  if (s == "raw") return LoopNormalization::raw;
  if (s == "sigma") return LoopNormalization::sigma;
  throw ParseError("unknown normalization '" + s + "'");
}

// fgl

Output cmd_fgl(const std::string& op, const Options& o) {
  Output out;
  Ring R = ring_of(o);
  if (op == "validate") {
    MultiSeries law = o.series ? parse_series(*o.series, R, {"x", "y"}, o.trunc)
                               : make_law(o, R, o.trunc).law();
    AxiomReport rep = check_axioms(law);
    out.add("unit", rep.unit);
    out.add("commutative", rep.commutative);
    out.add("associative", rep.associative);
    if (!rep.ok()) out.add("detail", rep.detail, json(rep.detail));
    out.require(rep.ok(), "group law axioms fail: " + rep.detail);
    return out;
  }
  FormalGroupLaw F = make_law(o, R, o.trunc);
  if (op == "construct") {
    out.add("law", F.law());
  } else if (op == "log") {
    out.add("log", fgl_log(F));
  } else if (op == "exp") {
    out.add("exp", fgl_exp(F));
  } else if (op == "nseries") {
    out.add("nseries", n_series(F, o.k));
  } else if (op == "transport") {
    if (!o.theta) throw InvalidArgument("transport needs --theta");
    MultiSeries th = parse_series(*o.theta, R, {"x"}, o.trunc);
    auto [G, iso] = transport(F, th);
    out.add("law", G.law());
    out.add("strict", iso.strict());
    bool hom = is_homomorphism(iso.theta, iso.source, iso.target);
    out.add("homomorphism", hom);
    out.require(hom, "theta is not a homomorphism onto the transported law");
  }
  return out;
}

// quotient

Output cmd_quotient(const std::string& op, const Options& o) {
  Output out;
  Ring A = ring_of(o);
  FormalGroupLaw F = make_law(o, A, o.trunc);
  SubgroupPoints H{A, {}};
  for (const auto& p : split(o.points, ',')) H.points.push_back(A.parse_element(p));
  if (H.points.empty()) throw InvalidArgument("quotient needs --points");
  SubgroupCheck sc = subgroup_check(F, H);
  if (!sc.ok) throw InvalidArgument("the points are not a subgroup: " + sc.reason);
  std::optional<RingElement> loc;
  if (o.localize) loc = A.parse_element(*o.localize);
  if (op == "f") {
    out.add("f", lubin_f(F, H));
  } else if (op == "g") {
    LubinG g = lubin_g(F, H, loc);
    out.add("g", g.g);
    out.add("leading", g.leading);
  } else {
    QuotientLaw q = quotient_law(F, H, loc);
    out.add("law", q.law.law());
    out.add("f", q.f);
    bool holds = quotient_identity_holds(F, q);
    out.add("homomorphism", holds);
    out.require(holds, "F/H(f(x), f(y)) != f(F(x, y))");
  }
  return out;
}

// theta, sigma

Output cmd_theta(const Options& o) {
  Output out;
  if (o.closed) {
    if (o.law != "ga") throw InvalidArgument("the closed form belongs to the additive law");
    out.add("theta", theta_additive_closed(o.trunc));
    return out;
  }
  EquivariantContext ctx = make_context(o, o.trunc, o.bound.value_or(o.N));
  ThetaSeries th = theta(ctx, o.N);
  if (o.in_L) {
    if (ctx.flavor() != ContextFlavor::multiplicative)
      throw InvalidArgument("the L form belongs to the multiplicative law");
    out.add("theta", theta_in_L(th));
  } else {
    out.add("theta", th.series);
  }
  // The zeros can be tested only once the product is an exact polynomial.
  if (th.series.is_polynomial()) {
    bool kernel = theta_kernel_holds(ctx, th);
    out.add("kernel", kernel);
    out.require(kernel, "theta does not vanish at some [k](qhat)");
  }
  return out;
}

Output cmd_sigma(const Options& o) {
  Output out;
  Ring R = o.ring ? Ring::parse(*o.ring) : sigma_ring(o.qorder);
  out.add("sigma", o.r ? sigma_modified(R, parse_rational(*o.r)) : sigma(R, o.cutoff));
  return out;
}

// tate

Output cmd_tate(const std::string& op, const Options& o) {
  Output out;
  Ring A = ring_of(o, "poly(QQ,eps:eps^3)");
  RingElement qh = A.parse_element(o.qhat.value_or(A.kind() == RingKind::polynomial &&
                                                           !A.generators().empty()
                                                       ? A.generators().front().name
                                                       : "0"));
  TateGroup G(make_law(o, A, o.trunc), A, qh);
  if (op == "exact-seq") {
    std::vector<RingElement> basis;
    if (o.basis)
      for (const auto& b : split(*o.basis, ',')) basis.push_back(A.parse_element(b));
    else
      basis.push_back(qh);
    ExactSequenceReport rep = exact_sequence_check(G, basis, o.samples, o.seed);
    out.add("samples", static_cast<long>(rep.samples));
    out.add("homomorphism", rep.homomorphism);
    out.add("surjective", rep.surjective);
    out.add("kernel", rep.kernel);
    out.add("projection", rep.projection);
    out.require(rep.ok(), rep.failures.empty() ? "exact sequence fails" : rep.failures.front());
    return out;
  }
  TatePoint p = G.point(A.parse_element(o.g), parse_rational(o.a));
  if (op == "mul") {
    out.add("product", tate_mul(G, p, G.point(A.parse_element(o.g2), parse_rational(o.a2))));
  } else if (op == "inv") {
    out.add("inverse", tate_inv(G, p));
  } else {
    auto n = torsion_order(G, p, o.order_bound);
    if (n)
      out.add("order", *n);
    else
      out.add("order", "none", json(nullptr));
  }
  return out;
}

// euler

Output cmd_euler(const Options& o) {
  Output out;
  EquivariantContext ctx = make_context(o, o.trunc, o.bound.value_or(o.N));
  EqBundle V;
  std::optional<std::vector<std::string>> vars;
  if (o.bundle) {
    V = parse_bundle(*o.bundle);
  } else {
    ChernData X = parse_manifold(o.manifold);
    V = loop_normal_bundle(X, o.N);
    vars = X.variables();
  }
  out.add("euler", euler_class(ctx, V, vars));
  out.add("unit", unit_check(ctx, V));
  return out;
}

// genus

Output cmd_genus(const std::string& op, const Options& o) {
  Output out;
  ChernData X = parse_manifold(o.manifold);
  const int d = X.dimension();
  if (op == "todd") {
    out.add("todd", genus_eval(X, todd_series(std::max(o.trunc, d))));
  } else if (op == "ahat") {
    out.add("ahat", genus_eval(X, ahat_series(std::max(o.trunc, d))));
  } else if (op == "eval") {
    Ring R = ring_of(o);
    if (o.series)
      out.add("genus", genus_eval(X, GenusSeries(parse_series(*o.series, R, {"x"}, std::max(o.trunc, d)))));
    else
      out.add("genus", genus_eval(X, todd_series_of(make_law(o, R, std::max(o.trunc, d + 1)))));
  } else if (op == "rr-check") {
    Ring R = ring_of(o, "poly(QQ,a,b)");
    const int T = std::max(o.trunc, d + 2);
    MultiSeries th = parse_series(o.theta.value_or("x + a*x^2 + b*x^3"), R, {"x"}, T);
    RiemannRoch rr = rr_transform(X, make_law(o, R, T), th);
    out.add("lhs", rr.lhs);
    out.add("rhs", rr.rhs);
    out.add("holds", rr.holds());
    out.require(rr.holds(), "Riemann-Roch sides differ");
  } else if (op == "loop" || op == "loop-vs-quotient") {
    if (op == "loop" && o.closed) {
      if (o.law != "ga") throw InvalidArgument("the closed loop genus belongs to the additive law");
      out.add("loop", additive_loop_genus(X));
      return out;
    }
    EquivariantContext ctx = make_context(o, std::max(o.trunc, d + 1), std::max(o.bound.value_or(o.N), o.N));
    if (op == "loop") {
      out.add("loop", loop_genus(X, ctx, o.N, parse_norm(o.norm)));
    } else {
      bool ok = loop_vs_quotient_check(X, ctx, o.N);
      out.add("holds", ok);
      out.require(ok, "loop genus differs from the genus of the quotient law");
    }
  } else if (op == "chi") {
    out.add("chi", chi_residue(X, parse_rational(o.r.value_or("1/2"))));
  }
  return out;
}

// tower

Output cmd_tower(const std::string& op, const Options& o) {
  Output out;
  EqBundle V = parse_bundle(o.bundle.value_or("x"));
  const int bound = o.bound.value_or(std::max({o.n, o.N, o.qorder + 1}));
  ThomTower T(make_context(o, o.trunc, bound), V);
  if (op == "transition") {
    out.add("transition", T.transition(o.n));
  } else if (op == "u") {
    out.add("u", T.unit_u(o.n));
  } else if (op == "omega-check") {
    MultiSeries one = T.constant(T.context().coeff().one());
    bool ok = true;
    for (int m = 1; m <= o.n; ++m) {
      ok = ok && T.push(T.omega(m - 1, one), m).value == T.omega(m, one).value;
      ok = ok && T.unit_u(m) == T.unit_u(m - 1) * T.transition(m);
    }
    out.add("holds", ok);
    out.require(ok, "omega_n differs from the pushed omega_{n-1}");
  } else if (op == "relative") {
    out.add("relative", relative_omega(T, o.N));
  } else if (op == "stabilize") {
    StabilizeForm form = o.form == "raw"     ? StabilizeForm::raw
                         : o.form == "sigma" ? StabilizeForm::sigma
                                             : throw ParseError("unknown form '" + o.form + "'");
    Stabilization st = stabilize(T, o.qorder, form);
    out.add("N_stable", static_cast<long>(st.N_stable));
    out.add("series", st.series);
    out.add("matches_closed_form", st.matches_closed_form);
    out.require(st.matches_closed_form, "the stable series differs from the closed form");
  }
  return out;
}

void print(const Output& res, const std::string& format, std::ostream& out) {
  if (format == "json") {
    if (res.fields.size() == 1) {
      out << res.fields.front().value.dump(2) << "\n";
    } else {
      json j = json::object();
      for (const auto& f : res.fields) j[f.name] = f.value;
      out << j.dump(2) << "\n";
    }
  } else if (res.fields.size() == 1) {
    out << res.fields.front().text << "\n";
  } else {
    for (const auto& f : res.fields) out << f.name << ": " << f.text << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Symbolic formal group law calculus", "fgc"};
  app.require_subcommand(1);
  std::function<Output()> action;

  auto common = [&](CLI::App* c) {
    c->add_option("--trunc", o.trunc, "root degree truncation")->check(CLI::NonNegativeNumber);
    c->add_option("--qorder", o.qorder, "q-hat or q order")->check(CLI::NonNegativeNumber);
    c->add_option("--N", o.N, "product cutoff")->check(CLI::NonNegativeNumber);
    c->add_option("--bound", o.bound, "largest |k| checked for units");
    c->add_option("--ring", o.ring, "coefficient ring descriptor");
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    c->add_option("--law", o.law, "ga, gm or log:<series in x>");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<Output()> fn) {
    CLI::App* c = parent->add_subcommand(name, help);
    common(c);
    c->callback([&action, fn] { action = fn; });
    return c;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  CLI::App* fgl = group("fgl", "formal group laws");
  for (std::string op : {"construct", "validate", "log", "exp", "nseries", "transport"}) {
    CLI::App* c = leaf(fgl, op, op, [&o, op] { return cmd_fgl(op, o); });
    if (op == "validate") c->add_option("--series", o.series, "candidate F(x, y)");
    if (op == "nseries") c->add_option("--k", o.k, "multiplier")->required();
    if (op == "transport") c->add_option("--theta", o.theta, "coordinate change in x")->required();
  }

  CLI::App* quot = group("quotient", "Lubin quotients");
  for (std::string op : {"f", "g", "law"}) {
    CLI::App* c = leaf(quot, op, op, [&o, op] { return cmd_quotient(op, o); });
    c->add_option("--points", o.points, "subgroup points, comma separated")->required();
    c->add_option("--localize", o.localize, "integer to invert");
  }

  {
    CLI::App* c = app.add_subcommand("theta", "renormalized theta product");
    common(c);
    c->add_flag("--closed", o.closed, "closed sine form (ga)");
    c->add_flag("--in-L", o.in_L, "sigma-normalized form in L (gm)");
    c->add_flag("--unlocalized", o.unlocalized, "use the unlocalized coefficients");
    c->callback([&] { action = [&o] { return cmd_theta(o); }; });
  }
  {
    CLI::App* c = app.add_subcommand("sigma", "Weierstrass sigma product");
    common(c);
    c->add_option("--cutoff", o.cutoff, "product cutoff");
    c->add_option("--r", o.r, "modified form sigma[L, r]");
    c->callback([&] { action = [&o] { return cmd_sigma(o); }; });
  }

  CLI::App* tate = group("tate", "the Tate extension group");
  for (std::string op : {"mul", "inv", "order", "exact-seq"}) {
    CLI::App* c = leaf(tate, op, op, [&o, op] { return cmd_tate(op, o); });
    c->add_option("--qhat", o.qhat, "nilpotent q-hat");
    if (op == "exact-seq") {
      c->add_option("--basis", o.basis, "ideal generators, comma separated");
      c->add_option("--samples", o.samples, "random samples");
      c->add_option("--seed", o.seed, "random seed");
    } else {
      c->add_option("--g", o.g, "first point, nilpotent part");
      c->add_option("--a", o.a, "first point, fractional part");
    }
    if (op == "mul") {
      c->add_option("--g2", o.g2, "second point, nilpotent part");
      c->add_option("--a2", o.a2, "second point, fractional part");
    }
    if (op == "order") c->add_option("--max", o.order_bound, "largest order tried");
  }

  {
    CLI::App* c = app.add_subcommand("euler", "equivariant Euler classes");
    common(c);
    c->add_option("--bundle", o.bundle, "root:scale:weight:multiplicity blocks");
    c->add_option("--manifold", o.manifold, "loop normal bundle of this manifold");
    c->add_flag("--unlocalized", o.unlocalized, "use the unlocalized coefficients");
    c->add_option("--qhat", o.qhat, "q-hat for a custom law");
    c->callback([&] { action = [&o] { return cmd_euler(o); }; });
  }

  CLI::App* genus = group("genus", "genera of Chern-root data");
  for (std::string op : {"eval", "todd", "ahat", "rr-check", "loop", "loop-vs-quotient", "chi"}) {
    CLI::App* c = leaf(genus, op, op, [&o, op] { return cmd_genus(op, o); });
    c->add_option("--manifold", o.manifold, "cpN, products or inline JSON");
    if (op == "eval") c->add_option("--series", o.series, "characteristic series in x");
    if (op == "rr-check") c->add_option("--theta", o.theta, "strict coordinate change in x");
    if (op == "loop") {
      c->add_option("--norm", o.norm, "renormalized, raw or sigma");
      c->add_flag("--closed", o.closed, "closed form over Q[t] (ga)");
    }
    if (op == "loop" || op == "loop-vs-quotient") {
      c->add_flag("--unlocalized", o.unlocalized, "use the unlocalized coefficients");
      c->add_option("--qhat", o.qhat, "q-hat for a custom law");
    }
    if (op == "chi") c->add_option("--r", o.r, "rational shift");
  }

  CLI::App* tower = group("tower", "the Thom tower");
  for (std::string op : {"transition", "u", "omega-check", "relative", "stabilize"}) {
    CLI::App* c = leaf(tower, op, op, [&o, op] { return cmd_tower(op, o); });
    c->add_option("--bundle", o.bundle, "root:scale:weight:multiplicity blocks");
    c->add_option("--n", o.n, "stage");
    c->add_option("--form", o.form, "sigma or raw");
    c->add_flag("--unlocalized", o.unlocalized, "use the unlocalized coefficients");
    c->add_option("--qhat", o.qhat, "q-hat for a custom law");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ParseError: " << e.what() << "\n";
    return 2;
  }
  if (!action) {
    err << "ParseError: no command\n";
    return 2;
  }
  try {
    Output res = action();
    print(res, o.format, out);
    if (res.failure) {
      err << "ContractFailure: " << *res.failure << "\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fgc::cli
