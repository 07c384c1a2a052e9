#pragma once

#include <stdexcept>
#include <string>

namespace rama {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// exactnum
class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};
class NotRepresentable : public Error {
 public:
  explicit NotRepresentable(const std::string& what)
      : Error("not representable in a quadratic radical tower: " + what) {}
};

// ball
class DivisorContainsZero : public Error {
 public:
  DivisorContainsZero() : Error("divisor ball contains zero") {}
};
class BranchCutStraddle : public Error {
 public:
  BranchCutStraddle()
      : Error("ball straddles the branch cut and no side flag was given") {}
};
class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what)
      : Error("iteration did not converge: " + what) {}
};

// modeq
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": " +
              what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};
class AsymmetricPolynomial : public Error {
 public:
  explicit AsymmetricPolynomial(const std::string& name)
      : Error("polynomial is not symmetric in u, v: " + name) {}
};
class LevelDegreeMismatch : public Error {
 public:
  explicit LevelDegreeMismatch(const std::string& what)
      : Error("level/s mismatch: " + what) {}
};
class NotRootOfUnity : public Error {
 public:
  NotRootOfUnity() : Error("substitution scale is not a k-th root of unity") {}
};

// hyper
class UnsupportedRegion : public Error {
 public:
  explicit UnsupportedRegion(const std::string& what)
      : Error("evaluation point outside supported discs: " + what) {}
};
class BranchAmbiguous : public Error {
 public:
  BranchAmbiguous()
      : Error("Re(alpha) >= 1 requires an explicit continuation side") {}
};

// derive
class NoSingularPoint : public Error {
 public:
  explicit NoSingularPoint(const std::string& what)
      : Error("no singular point found: " + what) {}
};
class IdentificationFailed : public Error {
 public:
  explicit IdentificationFailed(const std::string& what)
      : Error("exact identification failed: " + what) {}
};
class SingularJacobian : public Error {
 public:
  SingularJacobian() : Error("dP/dv vanishes at the singular point") {}
};
class DegeneratePoint : public Error {
 public:
  explicit DegeneratePoint(const std::string& what)
      : Error("degenerate singular point: " + what) {}
};
class UnrecognizedMultiplier : public Error {
 public:
  explicit UnrecognizedMultiplier(const std::string& what)
      : Error("multiplier matches neither admissible form: " + what) {}
};
class NonRationalSeries : public Error {
 public:
  explicit NonRationalSeries(const std::string& what)
      : Error("series parameters are not of rational type: " + what) {}
};

// piengine
class UncertifiedDigits : public Error {
 public:
  explicit UncertifiedDigits(const std::string& what)
      : Error("cannot certify requested digits: " + what) {}
};

// identify
class NoMatch : public Error {
 public:
  NoMatch() : Error("no algebraic candidate matched the input digits") {}
};

}  // namespace rama
