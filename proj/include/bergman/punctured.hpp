#ifndef BERGMAN_PUNCTURED_HPP
#define BERGMAN_PUNCTURED_HPP

#include <utility>
#include <vector>

#include "bergman/laplace.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/xreal.hpp"

namespace bergman::punctured {

// Punctured disk with the complete curvature -1 metric, frame e = dz/z for
// the canonical bundle, bundle power k+1.  Everything is radial: tau =
// -log|z| is the evaluation coordinate and the angle integrates out to 2 pi.
//
// Squared norm of z^a e^{k+1}:
//   norm(k, a) = 2^{k+2} pi * integral_0^inf e^{-2 a tau + 2k log tau} d tau
//              = 2^{k+2} pi (2k)! / (2a)^{2k+1},   a >= 1.

struct PuncturedParams {
  int k = 1;         // bundle power is k + 1
  int cutoff_a = 0;  // series truncation; <= 0 means pick default_cutoff
};

/// log-integrand of the norm integral, prefactor 2^{k+2} pi folded in.
double log_norm_integrand(int k, int a, double tau);
double dlog_norm_integrand(int k, int a, double tau);

/// Closed form.  a <= 0 throws errc::bad_argument ("non-integrable index").
XReal norm_exact(int k, int a);

/// Brute-force quadrature of the same integral; matches norm_exact to
/// ~10 * spec.rel_tol.
XReal norm_quad(int k, int a, const quad::QuadSpec& spec = {});

/// Second-order estimate at tau* = k / a.
laplace::LaplaceResult norm_laplace(int k, int a);

/// Smallest truncation index A >= max(4k, 8) whose certified geometric tail
/// is below 1e-12 of the partial sum at this tau.
int default_cutoff(int k, double tau);

/// Bergman density rho_{k+1}(tau) = (2^{2k} tau^{2k+2} / (pi (2k)!)) *
/// sum_{a>=1} a^{2k+1} e^{-2 a tau}, truncated at cutoff_a with a certified
/// geometric tail bound (<= 1e-12 relative, else errc::tail_not_certified).
XReal density(int k, double tau, int cutoff_a = 0);

/// Relative weight of each index a in the density sum; weights sum to 1.
std::vector<std::pair<int, double>> term_weights(int k, double tau, int cutoff_a = 0);

/// log of a single density term (before normalization), used by the weights
/// and by the identity checks against the per-section route.
double log_density_term(int k, int a, double tau);

}  // namespace bergman::punctured

#endif
