// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fgc {

/// Base class of every error raised by the library. `name()` is the stable
/// identifier the CLI prints on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define FGC_DEFINE_ERROR(Type)                                     \
  class Type : public Error {                                      \
   public:                                                         \
    explicit Type(const std::string& what) : Error(#Type, what) {} \
  };

/// Operands live in different rings (or a coercion is impossible).
FGC_DEFINE_ERROR(RingMismatch)
/// An element that must be invertible is not.
FGC_DEFINE_ERROR(NotAUnit)
/// A requested coefficient or identity lies beyond the available truncation.
FGC_DEFINE_ERROR(TruncationError)
/// A Laurent computation would need exponents below the declared tail.
FGC_DEFINE_ERROR(TailOverflow)
/// Series with different (ring, variables, truncation) were combined.
FGC_DEFINE_ERROR(ContextMismatch)
/// A substitution needs zero constant terms.
FGC_DEFINE_ERROR(ConstantTermError)
/// A candidate formal group law fails a unit/commutativity/associativity check.
FGC_DEFINE_ERROR(AxiomFailure)
/// A logarithm or exponential was requested over a ring that is not a Q-algebra.
FGC_DEFINE_ERROR(NotQAlgebra)
/// An isomorphism must be strict (linear coefficient 1).
FGC_DEFINE_ERROR(NonStrictIsomorphism)
/// sin(pi r) / cos(pi r) are not representable for the requested r.
FGC_DEFINE_ERROR(UnrepresentableAngle)
/// The residue integrand has a pole (r is an integer).
FGC_DEFINE_ERROR(PoleError)
/// A renormalized infinite product does not converge in the requested form.
FGC_DEFINE_ERROR(NonConvergent)
/// Malformed input: bad descriptor, expression or document.
FGC_DEFINE_ERROR(ParseError)
/// A precondition on arguments is violated.
FGC_DEFINE_ERROR(InvalidArgument)

#undef FGC_DEFINE_ERROR

}  // namespace fgc
