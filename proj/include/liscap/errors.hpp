#pragma once

#include <stdexcept>
#include <string>

namespace liscap {

/// Thrown when a numerical routine (quadrature, root refinement) cannot
/// reach its tolerance contract. Carries the error estimate it did achieve.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Thrown by root finders when the supplied bracket has no sign change.
class bracket_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace liscap
