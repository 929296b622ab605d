#ifndef WULFF_ERRORS_HPP
#define WULFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wulff {

/// Argument outside the domain of an operation (|nu3| > 1, z outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Anisotropy that violates uniform convexity of the Wulff shape.
class InvalidModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear system whose elimination met a pivot below the singularity floor.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The generating curve reached the axis (or a radius fell below the pinch
/// tolerance). Carries the height at which it happened.
class PinchError : public std::runtime_error {
 public:
  PinchError(const std::string& what, double z, double radius)
      : std::runtime_error(what), z_(z), radius_(radius) {}

  double z() const noexcept { return z_; }
  double radius() const noexcept { return radius_; }

 private:
  double z_;
  double radius_;
};

}  // namespace wulff

#endif  // WULFF_ERRORS_HPP
