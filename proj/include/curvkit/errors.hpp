#pragma once

#include <stdexcept>
#include <string>

namespace curvkit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (bad index, point on a curve, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Element of the algebra has no multiplicative inverse.
class NotInvertibleError : public Error {
  public:
    using Error::Error;
};

/// Kernel evaluated at its singular point x = y.
class SingularityError : public Error {
  public:
    using Error::Error;
};

/// Evaluation point lies on (or too close to) the integration surface.
class ProximityError : public Error {
  public:
    using Error::Error;
};

/// Requested resource size beyond the supported limit.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Scene or option parsing failure. `where` names the offending field.
class ParseError : public Error {
  public:
    ParseError(const std::string& where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

  private:
    std::string where_;
};

/// Adaptive quadrature gave up; carries the best estimate it had.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double best_re, double best_im, double error_bound)
        : Error(what), best_re_(best_re), best_im_(best_im), error_bound_(error_bound) {}

    double best_real() const noexcept { return best_re_; }
    double best_imag() const noexcept { return best_im_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    double best_re_;
    double best_im_;
    double error_bound_;
};

}  // namespace curvkit
