#include "bergman/laplace.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman::laplace {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double maximize_concave(const Fn& dg, double lo, double hi) {
  if (!(lo < hi)) throw Error(errc::bad_argument, "maximize_concave: requires lo < hi");
  double flo = dg(lo), fhi = dg(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo > 0.0 && fhi < 0.0))
    throw Error(errc::not_bracketed, "maximize_concave: maximizer not bracketed");
  const double tol = 1e-12 * std::max(1.0, std::fabs(flo));

  double a = lo, b = hi, fa = flo, fb = fhi;
  for (int iter = 0; iter < 200; ++iter) {
    // Secant candidate lands inside the bracket since fa, fb straddle zero;
    // fall back on the midpoint whenever it stops making progress.
    double t = b - fb * (b - a) / (fb - fa);
    const double mid = 0.5 * (a + b);
    if (!(t > a && t < b)) t = mid;
    if (iter % 2 == 1) t = mid;  // guarantees geometric bracket shrinkage
    const double ft = dg(t);
    if (std::fabs(ft) <= tol) return t;
    if (ft > 0.0) {
      a = t;
      fa = ft;
    } else {
      b = t;
      fb = ft;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::max(std::fabs(a), std::fabs(b))))
      return std::fabs(fa) <= std::fabs(fb) ? a : b;
  }
  return 0.5 * (a + b);
}

double maximize_concave(const Fn& dg, const Fn& ddg, double lo, double hi) {
  if (!(lo < hi)) throw Error(errc::bad_argument, "maximize_concave: requires lo < hi");
  double flo = dg(lo), fhi = dg(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo > 0.0 && fhi < 0.0))
    throw Error(errc::not_bracketed, "maximize_concave: maximizer not bracketed");
  const double tol = 1e-12 * std::max(1.0, std::fabs(flo));

  double a = lo, b = hi;
  double t = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    const double ft = dg(t);
    if (std::fabs(ft) <= tol) return t;
    if (ft > 0.0) a = t; else b = t;
    const double d = ddg(t);
    double next = (d < 0.0) ? t - ft / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::max(std::fabs(a), std::fabs(b))))
      return t;
  }
  return t;
}

LaplaceResult laplace_estimate(const Fn& g, const Fn& g2, double t_star) {
  LaplaceResult r;
  r.t_star = t_star;
  r.g2_star = g2(t_star);
  if (!(r.g2_star < 0.0)) throw Error(errc::not_concave, "laplace_estimate: not locally concave");
  r.g_star = g(t_star);
  r.estimate = XReal::from_log(r.g_star + 0.5 * std::log(2.0 * std::numbers::pi / -r.g2_star));

  const double sigma = 1.0 / std::sqrt(-r.g2_star);
  r.window_halfwidth = 3.0 * sigma;
  const double h = sigma / 64.0;
  auto edge_tail = [&](double edge, double outward_sign) {
    double slope = (g(edge + h) - g(edge - h)) / (2.0 * h);
    // outward derivative must be negative for the lemma; fall back on the
    // quadratic model slope if the difference quotient degenerates.
    if (!(outward_sign * slope < 0.0)) slope = outward_sign * (-3.0 / sigma);
    const double gv = g(edge);
    if (gv == -kInf) return XReal::zero();
    return XReal::from_log(gv - std::log(std::fabs(slope)));
  };
  r.right_tail = edge_tail(t_star + r.window_halfwidth, +1.0);
  r.left_tail = edge_tail(t_star - r.window_halfwidth, -1.0);
  return r;
}

XReal concave_tail_bound(double f_x0, double df_x0) {
  if (!(df_x0 < 0.0)) throw Error(errc::bad_argument, "concave_tail_bound: requires f'(x0) < 0");
  if (f_x0 == -kInf) return XReal::zero();
  return XReal::from_log(f_x0 - std::log(-df_x0));
}

double window_mass_fraction(const quad::LogFn& logf, double center, double halfwidth,
                            const quad::QuadSpec& spec) {
  if (!(halfwidth > 0.0))
    throw Error(errc::bad_argument, "window_mass_fraction: halfwidth must be > 0");
  const XReal window = quad::integrate_log(logf, center - halfwidth, center + halfwidth, spec);
  XReal full = window;
  double h = halfwidth;
  int quiet_rounds = 0;
  for (int i = 0; i < 64; ++i) {
    const XReal left = quad::integrate_log(logf, center - 2.0 * h, center - h, spec);
    const XReal right = quad::integrate_log(logf, center + h, center + 2.0 * h, spec);
    full = full + left + right;
    const XReal flank = left + right;
    const bool negligible =
        flank.is_zero() ||
        (!full.is_zero() && flank.logmag() <= full.logmag() + std::log(spec.rel_tol) - std::numbers::ln2);
    quiet_rounds = negligible ? quiet_rounds + 1 : 0;
    if (quiet_rounds >= 2) {
      if (full.is_zero()) throw Error(errc::bad_argument, "window_mass_fraction: zero integrand");
      if (window.is_zero()) return 0.0;
      const double frac = std::exp(window.logmag() - full.logmag());
      return std::min(1.0, std::max(0.0, frac));
    }
    h *= 2.0;
  }
  throw Error(errc::no_convergence, "window_mass_fraction: full integral did not stabilize");
}

}  // namespace bergman::laplace
