#ifndef BERGMAN_XREAL_HPP
#define BERGMAN_XREAL_HPP

#include <string>

#include "bergman/error.hpp"

namespace bergman {

/// Signed extended-range real, carried as (sign, natural log of |value|).
///
/// Every quantity in the collar/cusp models lives here: e^{pi/epsilon},
/// epsilon^{-2k-1}, (2k)! and their products stay representable long after
/// double overflows.  Value semantics throughout; safe for unrestricted
/// concurrent use.
///
/// Conventions:
///   - sign 0 is exact zero; logmag is then meaningless (stored as 0).
///   - addition uses max-anchored log-sum; a subtraction that cancels below
///     1e-14 relative returns exact zero so downstream sign tests are stable.
class XReal {
 public:
  XReal() : sign_(0), log_(0.0) {}

  static XReal zero() { return XReal(); }
  static XReal one() { return from_log(0.0); }
  static XReal from_double(double x);
  /// Value sign * e^{logmag}.  logmag may be any finite double (or -inf,
  /// which collapses to zero).
  static XReal from_log(double logmag, int sign = +1);

  int sign() const { return sign_; }
  double logmag() const { return log_; }
  bool is_zero() const { return sign_ == 0; }

  /// Saturates to +-inf / +-0 outside double range.
  double to_double() const;

  /// Canonical text form "+exp(L)" / "-exp(L)" / "0".
  std::string str() const;
  /// Decimal rendering ("%.17g"); only valid when |logmag| < 700.
  std::string decimal() const;
  bool has_decimal() const;

  XReal operator-() const;
  XReal abs() const;

  friend XReal operator+(const XReal& x, const XReal& y);
  friend XReal operator-(const XReal& x, const XReal& y);
  friend XReal operator*(const XReal& x, const XReal& y);
  /// Throws Error(errc::division_by_zero) on zero divisor.
  friend XReal operator/(const XReal& x, const XReal& y);

  XReal pow_int(long n) const;

  /// Total order by real value.
  friend bool operator<(const XReal& x, const XReal& y);
  friend bool operator>(const XReal& x, const XReal& y) { return y < x; }
  friend bool operator==(const XReal& x, const XReal& y) {
    return x.sign_ == y.sign_ && (x.sign_ == 0 || x.log_ == y.log_);
  }

 private:
  XReal(int sign, double logmag) : sign_(sign), log_(logmag) {}
  int sign_;
  double log_;
};

/// ln(n!).  Exact integer product for n <= 20, lgamma beyond (relative
/// error well under 1e-12).  n < 0 throws errc::bad_argument.
double log_factorial(long n);

}  // namespace bergman

#endif
