#ifndef HILLGREEN_ERRORS_HPP_
#define HILLGREEN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hillgreen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. t outside [0, L]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed potential descriptor or other user-supplied input.
class DescriptorError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double t) : Error(what), t_(t) {}
  /// Time at which the step size underflowed.
  double failing_time() const noexcept { return t_; }

 private:
  double t_;
};

/// The homogeneous boundary problem has a nontrivial solution at this lambda.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& problem, double determinant)
      : Error("resonant problem " + problem + " (boundary determinant " +
              std::to_string(determinant) + ")"),
        problem_(problem),
        determinant_(determinant) {}

  const std::string& problem() const noexcept { return problem_; }
  double determinant() const noexcept { return determinant_; }

 private:
  std::string problem_;
  double determinant_;
};

/// Closed-form kernel evaluated at a pole of its denominator.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A comparison result was requested but its sign hypothesis does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace hillgreen

#endif  // HILLGREEN_ERRORS_HPP_
