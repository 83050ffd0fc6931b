// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end and the JSON series document format.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fgc/chern.hpp"
#include "fgc/polyseries.hpp"

namespace fgc::cli {

struct SeriesTerm {
  std::vector<int> exponents;
  std::string coeff;
  friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

/// A series as plain data: terms in lexicographic exponent order with
/// coefficients in the canonical text form of `coeff_ring`.
struct SeriesDocument {
  std::vector<std::string> vars;
  int trunc = 0;
  std::string coeff_ring;
  std::vector<SeriesTerm> terms;
  friend bool operator==(const SeriesDocument&, const SeriesDocument&) = default;
};

SeriesDocument to_document(const MultiSeries& f);
MultiSeries from_document(const SeriesDocument& doc);
/// Canonical JSON text.
std::string print_document(const SeriesDocument& doc);
/// Throws ParseError.
SeriesDocument parse_document(const std::string& text);

/// A polynomial expression such as `x + a*x^2` read as a series in `vars`
/// over `ring`, truncated at `trunc`.
MultiSeries parse_series(const std::string& text, const Ring& ring,
                         const std::vector<std::string>& vars, int trunc);

/// `cpN`, products such as `cp1xcp2`, `pt`, or inline JSON
/// `{"blocks":[{"top_power":2,"degree":1,"roots":[{"weight":1,"multiplicity":3}]}]}`.
ChernData parse_manifold(const std::string& text);

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 when a checked identity fails and 2 on input errors, which are reported
/// on `err` as `<ErrorName>: <message>`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fgc::cli
