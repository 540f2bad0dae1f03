#ifndef SIRSHARE_ERRORS_H_
#define SIRSHARE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sirshare {

// Root of every error the library throws. Callers that only need a
// message can catch this; the subclasses let tests and the CLI tell
// the failure classes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that cannot be interpreted at all (non-square table, NaN,
// mixed coordinate dimensions, schema violations).
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

// A generator could not satisfy its own post-conditions.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The route is not SIR-feasible where feasibility is required.
class FeasibilityError : public Error {
 public:
  FeasibilityError(const std::string& what, int stage)
      : Error(what), stage_(stage) {}
  // 1-based pickup stage whose constraint failed.
  int stage() const { return stage_; }

 private:
  int stage_;
};

class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

// Zero weights or zero distances where the formula divides by them.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A ratio whose denominator vanishes.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance exceeds the cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

// An internal solver produced a result that contradicts its own
// post-conditions (for example a min-cost flow that skips a passenger).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace sirshare

#endif  // SIRSHARE_ERRORS_H_
