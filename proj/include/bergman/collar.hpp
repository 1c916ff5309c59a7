#ifndef BERGMAN_COLLAR_HPP
#define BERGMAN_COLLAR_HPP

#include <utility>
#include <vector>

#include "bergman/laplace.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/xreal.hpp"

namespace bergman::collar {

// Rotationally invariant curvature -1 metric on C* whose unit circle is a
// closed geodesic of length 2 pi epsilon.  Coordinates:
//   t   = log|z|,                |t| < pi/(2 epsilon)
//   u   = arc length along the t-curves, u(t=0) = 0
//   tau = pi/(2 epsilon) - t     (distance-to-end coordinate; exchanged
//                                 alongside t because t saturates in double
//                                 precision within ~15 digits of the end)
// Profile f(t) = epsilon^2 cosh^2 u, frame e = dz/z with |e|^2 = 2/f.

struct CollarParams {
  double epsilon = 1e-2;  // central geodesic length / (2 pi), in (0, 0.1]
  int k = 1;              // bundle power is k + 1
  int cutoff_a = 0;       // <= 0 means max(4k, 8)

  int cutoff() const { return cutoff_a > 0 ? cutoff_a : std::max(4 * k, 8); }
  void validate() const;  // throws errc::bad_argument on out-of-range input
};

double half_period(double epsilon);  // pi / (2 epsilon)

/// tau(u) = (2/epsilon) atan(e^{-u}); exact inverse pair with u_from_tau.
double tau_from_u(double epsilon, double u);
/// u(tau) = -log(tan(epsilon tau / 2)) for tau in (0, pi/epsilon).
double u_from_tau(double epsilon, double tau);

/// t(u) = (2/epsilon) atan(tanh(u/2)); odd in u by construction.
double t_of_u(double epsilon, double u);
/// Inverse of t_of_u: Newton on the closed form (analytic seed, bisection
/// fallback).  |t| >= pi/(2 epsilon) throws errc::out_of_domain.
double u_of_t(double epsilon, double t);

/// log f(t) = 2 log(epsilon cosh u(t)); even in t, f(0) = epsilon^2.
double log_f_of_t(double epsilon, double t);
double log_f_of_u(double epsilon, double u);

/// epsilon * sinh(u), overflow-safe (saturates to +-inf for huge |u|).
double eps_sinh_u(double epsilon, double u);

/// log-integrand of the section-norm integral I_a, prefactor folded in:
/// log(2^{k+2} pi) + 2 a t - k log f(t).
double log_norm_integrand(const CollarParams& p, int a, double t);
double dlog_norm_integrand(const CollarParams& p, int a, double t);

/// Maximizer of the norm integrand: epsilon sinh(u_a) = a / k.
double maximizer_u(const CollarParams& p, int a);
double maximizer_t(const CollarParams& p, int a);

/// Norm integrand anchored at its maximizer: value(t) returns
/// log_norm_integrand(t) - anchor computed without forming either huge
/// number, so the quadrature sees O(1) logs.  anchor + value(t) is the true
/// log integrand.  The raw log carries |log| * eps_mach noise (2 a t alone
/// reaches ~3e4), which would put the target relative tolerance out of
/// reach of any panel rule.
struct AnchoredIntegrand {
  CollarParams params;
  int a = 0;
  double t_star = 0.0;
  double log_f_star = 0.0;
  double anchor = 0.0;
  double operator()(double t) const;
  double slope(double t) const;  // d/dt of the log integrand
};
AnchoredIntegrand anchored_norm_integrand(const CollarParams& p, int a);

/// Mass fraction of the norm integrand outside |t - t_a| <= halfwidth.
double norm_mass_outside(const CollarParams& p, int a, double halfwidth,
                         const quad::QuadSpec& spec = {});

/// Squared norm I_a of z^a e^{k+1} by quadrature over |t| < pi/(2 epsilon),
/// truncated near the ends by the concavity-lemma tail bound.
/// |a| > cutoff is rejected rather than silently truncated.
XReal norm(const CollarParams& p, int a, const quad::QuadSpec& spec = {});

/// Second-order estimate of the same integral at the closed-form maximizer.
laplace::LaplaceResult norm_laplace(const CollarParams& p, int a);

/// Cached section norms I_a for |a| <= cutoff, ascending in a.  Built once
/// and immutable afterwards, so sweeps may share it across threads.
struct SectionNorms {
  CollarParams params;
  std::vector<std::pair<int, XReal>> entries;  // (a, I_a)

  const XReal& at(int a) const;  // throws errc::bad_argument if |a| > cutoff
};

SectionNorms build_norms(const CollarParams& p, const quad::QuadSpec& spec = {});

/// Bergman density rho(t) = (2/f)^{k+1} sum_a e^{2 a t} / I_a, summed over
/// |a| <= cutoff with a certified geometric tail (errc::tail_not_certified
/// when the cutoff is insufficient at this t).  Even in t.
XReal density(const SectionNorms& norms, double t);
XReal density(const CollarParams& p, double t, const quad::QuadSpec& spec = {});

struct CutTailReport {
  double u_lo = 0.0, u_hi = 0.0;  // region cosh u in (-1/(2 eps log eps), -1/(eps log eps))
  XReal density_sup;              // max of density over a 64-point grid in u
  XReal bound;                    // epsilon (log epsilon / k)^{2k}
  bool pass = false;              // density_sup < bound
};

/// Checks the sup-norm bound for unit sections on the transition annulus.
/// Requires epsilon <= 1e-2 so the region is nonempty and inside the collar.
CutTailReport cut_tail_check(const CollarParams& p, const quad::QuadSpec& spec = {});
CutTailReport cut_tail_check(const SectionNorms& norms);

struct CuspComparison {
  double tau = 0.0;         // image coordinate: epsilon cosh u -> 1/(2 tau)
  double distortion = 0.0;  // tanh^2 u, the du^2 stretch of the pulled-back metric
};

/// Comparison map from the collar end to the cusp model; requires u > 0.
CuspComparison cusp_comparison(double epsilon, double u);

}  // namespace bergman::collar

#endif
