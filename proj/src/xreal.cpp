#include "bergman/xreal.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace bergman {

namespace {
constexpr double kCancelRel = 1e-14;
constexpr double kDecimalLimit = 700.0;
}  // namespace

XReal XReal::from_double(double x) {
  if (x == 0.0) return zero();
  if (std::isnan(x)) throw Error(errc::bad_argument, "XReal::from_double: NaN");
  if (std::isinf(x)) throw Error(errc::bad_argument, "XReal::from_double: inf");
  return XReal(x > 0 ? +1 : -1, std::log(std::fabs(x)));
}

XReal XReal::from_log(double logmag, int sign) {
  if (sign == 0 || logmag == -std::numeric_limits<double>::infinity()) return zero();
  if (std::isnan(logmag) || logmag == std::numeric_limits<double>::infinity())
    throw Error(errc::bad_argument, "XReal::from_log: logmag not finite");
  if (sign != +1 && sign != -1) throw Error(errc::bad_argument, "XReal::from_log: bad sign");
  return XReal(sign, logmag);
}

double XReal::to_double() const {
  if (sign_ == 0) return 0.0;
  return sign_ * std::exp(log_);
}

bool XReal::has_decimal() const { return sign_ == 0 || std::fabs(log_) < kDecimalLimit; }

std::string XReal::str() const {
  if (sign_ == 0) return "0";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%cexp(%.17g)", sign_ > 0 ? '+' : '-', log_);
  return buf;
}

std::string XReal::decimal() const {
  if (sign_ == 0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", to_double());
  return buf;
}

XReal XReal::operator-() const { return XReal(-sign_, log_); }
XReal XReal::abs() const { return XReal(sign_ == 0 ? 0 : 1, log_); }

XReal operator+(const XReal& x, const XReal& y) {
  if (x.sign_ == 0) return y;
  if (y.sign_ == 0) return x;
  const XReal& big = (x.log_ >= y.log_) ? x : y;
  const XReal& small = (x.log_ >= y.log_) ? y : x;
  const double d = big.log_ - small.log_;  // >= 0
  if (x.sign_ == y.sign_) return XReal(x.sign_, big.log_ + std::log1p(std::exp(-d)));
  // Opposite signs: the result is |1 - e^{-d}| relative to the larger term.
  if (d < kCancelRel) return XReal::zero();
  return XReal(big.sign_, big.log_ + std::log1p(-std::exp(-d)));
}

XReal operator-(const XReal& x, const XReal& y) { return x + (-y); }

XReal operator*(const XReal& x, const XReal& y) {
  if (x.sign_ == 0 || y.sign_ == 0) return XReal::zero();
  return XReal(x.sign_ * y.sign_, x.log_ + y.log_);
}

XReal operator/(const XReal& x, const XReal& y) {
  if (y.sign_ == 0) throw Error(errc::division_by_zero, "XReal: division by zero");
  if (x.sign_ == 0) return XReal::zero();
  return XReal(x.sign_ * y.sign_, x.log_ - y.log_);
}

XReal XReal::pow_int(long n) const {
  if (sign_ == 0) {
    if (n > 0) return zero();
    if (n == 0) return one();
    throw Error(errc::division_by_zero, "XReal: zero to a negative power");
  }
  const int s = (sign_ < 0 && (n & 1L)) ? -1 : +1;
  return XReal(s, log_ * static_cast<double>(n));
}

bool operator<(const XReal& x, const XReal& y) {
  if (x.sign_ != y.sign_) return x.sign_ < y.sign_;
  if (x.sign_ == 0) return false;
  return x.sign_ > 0 ? x.log_ < y.log_ : y.log_ < x.log_;
}

double log_factorial(long n) {
  if (n < 0) throw Error(errc::bad_argument, "log_factorial: negative argument");
  if (n <= 20) {
    unsigned long long p = 1;
    for (long i = 2; i <= n; ++i) p *= static_cast<unsigned long long>(i);
    return std::log(static_cast<double>(p));
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace bergman
