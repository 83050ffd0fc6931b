// SPDX-License-Identifier: Apache-2.0
#include "fgc/chern.hpp"

#include <cctype>

#include "fgc/errors.hpp"

namespace fgc {

ChernData ChernData::point() { return {}; }

ChernData ChernData::cp(int n) {
  if (n < 0) throw InvalidArgument("CP^n needs n >= 0");
  if (n == 0) return point();
  return {{ChernBlock{n, 1, {{1, n + 1}, {0, -1}}}}};
}

ChernData ChernData::hypersurface(int n, int e) {
  if (n < 1 || e < 1) throw InvalidArgument("hypersurface needs n >= 1 and degree >= 1");
  return {{ChernBlock{n, e, {{1, n + 2}, {e, -1}, {0, -1}}}}};
}

ChernData ChernData::parse(const std::string& name) {
  if (name == "pt" || name == "point") return point();
  ChernData out;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    std::size_t end = name.find('x', pos);
    if (end == std::string::npos) end = name.size();
    std::string part = name.substr(pos, end - pos);
    if (part.size() < 3 || part.compare(0, 2, "cp") != 0)
      throw ParseError("unknown manifold factor '" + part + "'");
    for (std::size_t i = 2; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        throw ParseError("unknown manifold factor '" + part + "'");
    out = out.product(cp(std::stoi(part.substr(2))));
    pos = end + 1;
  }
  return out;
}

ChernData ChernData::product(const ChernData& other) const {
  ChernData out = *this;
  out.blocks.insert(out.blocks.end(), other.blocks.begin(), other.blocks.end());
  return out;
}

int ChernData::dimension() const {
  int d = 0;
  for (const auto& b : blocks) d += b.top_power;
  return d;
}

int ChernData::rank() const {
  int r = 0;
  for (const auto& b : blocks)
    for (const auto& root : b.roots) r += root.multiplicity;
  return r;
}

std::vector<std::string> ChernData::variables() const {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < blocks.size(); ++i) v.push_back("h" + std::to_string(i + 1));
  return v;
}

bool ChernData::first_chern_class_vanishes() const {
  for (const auto& b : blocks) {
    long c1 = 0;
    for (const auto& r : b.roots) c1 += r.weight * r.multiplicity;
    if (c1 != 0) return false;
  }
  return true;
}

}  // namespace fgc
