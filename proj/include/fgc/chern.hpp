// SPDX-License-Identifier: Apache-2.0
//
// Manifolds as Chern-root data. Each block has one cohomology generator h_i,
// a top power n_i with <h_i^{n_i}, [X]> = degree_i, and virtual Chern roots
// w * h_i with integer multiplicities. CP^n is the block
// {n, 1, [(1, n+1), (0, -1)]}: T CP^n + C = (n+1) O(1).
#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace fgc {

struct ChernRoot {
  long weight = 1;
  int multiplicity = 1;
};

struct ChernBlock {
  int top_power = 0;
  mpz_class degree = 1;
  std::vector<ChernRoot> roots;
};

struct ChernData {
  std::vector<ChernBlock> blocks;

  static ChernData point();
  static ChernData cp(int n);
  /// A degree-e hypersurface of dimension n in CP^{n+1}:
  /// {n, e, [(1, n+2), (e, -1), (0, -1)]}.
  static ChernData hypersurface(int n, int e);
  /// `cpN` factors joined by `x`, e.g. `cp1xcp1`; `pt` for a point.
  static ChernData parse(const std::string& name);

  ChernData product(const ChernData& other) const;
  /// Complex dimension, the sum of the top powers.
  int dimension() const;
  /// Virtual rank sum of multiplicities, which equals the dimension for
  /// tangent data.
  int rank() const;
  /// Names h1, h2, ... of the block generators.
  std::vector<std::string> variables() const;
  /// c_1 = sum of w * m vanishes in every block.
  bool first_chern_class_vanishes() const;
};

}  // namespace fgc
