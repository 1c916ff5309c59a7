#ifndef BERGMAN_LAPLACE_HPP
#define BERGMAN_LAPLACE_HPP

#include <functional>

#include "bergman/quadrature.hpp"
#include "bergman/xreal.hpp"

namespace bergman::laplace {

using Fn = std::function<double(double)>;

/// Second-order estimate of one concave-exponent integral: at the maximizer
/// t* of g, integral e^g ~ e^{g(t*)} sqrt(2 pi / |g''(t*)|).
///
/// window_halfwidth is the curvature window 3 / sqrt(|g''|); left_tail and
/// right_tail are the concavity-lemma bounds e^{g}/|g'| at the window edges
/// (the edge slope is taken by a centered difference of g).
struct LaplaceResult {
  double t_star = 0.0;
  double g_star = 0.0;
  double g2_star = 0.0;  // < 0
  double window_halfwidth = 0.0;
  XReal estimate;
  XReal left_tail;
  XReal right_tail;
};

/// Root of dg on [lo, hi] for strictly decreasing dg with a sign change.
/// Safeguarded secant iteration with guaranteed bracket maintenance and
/// bisection fallback; |dg(t*)| <= 1e-12 * max(1, |dg(lo)|) at the result.
/// Throws errc::not_bracketed when dg does not change sign on [lo, hi].
double maximize_concave(const Fn& dg, double lo, double hi);

/// Same contract, Newton iteration using the supplied derivative of dg
/// (i.e. g''), still bracketed.
double maximize_concave(const Fn& dg, const Fn& ddg, double lo, double hi);

/// Throws errc::not_concave unless g2(t_star) < 0.
LaplaceResult laplace_estimate(const Fn& g, const Fn& g2, double t_star);

/// The concavity lemma's tail bound e^{f(x0)} / (-f'(x0)) for the integral of
/// e^f over [x0, inf).  Requires df_x0 < 0.
XReal concave_tail_bound(double f_x0, double df_x0);

/// Fraction of the integral of e^{logf} carried by [center-h, center+h].
/// The full integral is found by doubling the window until the added flanks
/// are negligible at spec.rel_tol.  Result clamped to [0, 1].
double window_mass_fraction(const quad::LogFn& logf, double center, double halfwidth,
                            const quad::QuadSpec& spec = {});

}  // namespace bergman::laplace

#endif
