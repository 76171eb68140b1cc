// Exception hierarchy for the effdio library.
//
// Every error thrown by the library derives from effdio::Error, so callers
// can catch one base type. Subtypes distinguish domain violations (bad
// inputs), resource exhaustion (factorization / search budgets), and loss of
// certified numeric precision.

#pragma once

#include <stdexcept>
#include <string>

namespace effdio {

// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An argument lies outside the mathematical domain of the operation
// (zero where nonzero is required, malformed input string, u = 0, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A Weierstrass model has discriminant zero.
class SingularCurve : public DomainError {
 public:
  explicit SingularCurve(const std::string& what) : DomainError(what) {}
};

// Local reduction data was requested for a model that is not minimal at p.
class NotMinimalAtP : public DomainError {
 public:
  explicit NotMinimalAtP(const std::string& what) : DomainError(what) {}
};

// An operation requiring integral Weierstrass coefficients received a
// non-integral model.
class NonIntegralModel : public DomainError {
 public:
  explicit NonIntegralModel(const std::string& what) : DomainError(what) {}
};

// The Legendre parameter of a Frey curve is 0 or 1.
class DegenerateLambda : public DomainError {
 public:
  explicit DegenerateLambda(const std::string& what) : DomainError(what) {}
};

// A claimed solution does not satisfy its equation exactly.
class NotASolution : public DomainError {
 public:
  explicit NotASolution(const std::string& what) : DomainError(what) {}
};

// The Mordell parameter a is zero.
class ZeroA : public DomainError {
 public:
  explicit ZeroA(const std::string& what) : DomainError(what) {}
};

// A binary cubic form is singular (discriminant zero) or degenerate
// (reducible over the rationals).
class SingularForm : public DomainError {
 public:
  explicit SingularForm(const std::string& what) : DomainError(what) {}
};

// A composite cofactor survived the configured factorization effort budget.
// The caller may retry with a larger budget.
class FactorizationExhausted : public Error {
 public:
  explicit FactorizationExhausted(const std::string& what) : Error(what) {}
};

// A certified error bound could not be met at the working precision.
class PrecisionLoss : public Error {
 public:
  explicit PrecisionLoss(const std::string& what) : Error(what) {}
};

// An enumeration exceeded its node budget; partial results may still be
// reported by the caller with an honest "bounded" completeness flag.
class SearchBudgetExceeded : public Error {
 public:
  explicit SearchBudgetExceeded(const std::string& what) : Error(what) {}
};

}  // namespace effdio
