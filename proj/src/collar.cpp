#include "bergman/collar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman::collar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_cosh(double u) {
  const double a = std::fabs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_prefactor(int k) { return (k + 2) * std::numbers::ln2 + std::log(std::numbers::pi); }

}  // namespace

void CollarParams::validate() const {
  if (!(epsilon > 0.0) || epsilon > 0.1)
    throw Error(errc::bad_argument, "collar: epsilon must lie in (0, 0.1]");
  if (k < 1) throw Error(errc::bad_argument, "collar: k must be >= 1");
  if (epsilon * k >= 0.5)
    throw Error(errc::bad_argument, "collar: epsilon * k must be < 0.5");
  if (cutoff() < 1) throw Error(errc::bad_argument, "collar: cutoff must be >= 1");
}

double half_period(double epsilon) { return (std::numbers::pi / 2.0) / epsilon; }

double tau_from_u(double epsilon, double u) { return (2.0 / epsilon) * std::atan(std::exp(-u)); }

double u_from_tau(double epsilon, double tau) {
  if (!(tau > 0.0) || !(tau < std::numbers::pi / epsilon))
    throw Error(errc::out_of_domain, "collar: tau outside (0, pi/epsilon)");
  return -std::log(std::tan(0.5 * epsilon * tau));
}

double t_of_u(double epsilon, double u) {
  if (u == 0.0) return 0.0;
  if (u < 0.0) return -t_of_u(epsilon, -u);
  return half_period(epsilon) - tau_from_u(epsilon, u);
}

double u_of_t(double epsilon, double t) {
  const double hp = half_period(epsilon);
  if (!(std::fabs(t) < hp)) throw Error(errc::out_of_domain, "collar: outside collar range");
  if (t == 0.0) return 0.0;
  if (t < 0.0) return -u_of_t(epsilon, -t);
  const double tau = hp - t;
  double u = u_from_tau(epsilon, tau);  // analytic seed
  // Newton polish on tau_from_u(u) = tau; d tau/du = -1/(eps cosh u).
  double lo = u - 1.0, hi = u + 1.0;
  for (int iter = 0; iter < 8; ++iter) {
    const double r = tau_from_u(epsilon, u) - tau;
    if (r == 0.0) break;
    const double eu = std::exp(-u);
    const double dtau_du = -(2.0 / epsilon) * eu / (1.0 + eu * eu);
    double next = u - r / dtau_du;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    if (r > 0.0) lo = u; else hi = u;                       // tau_from_u decreasing in u
    if (next == u) break;
    u = next;
    if (std::fabs(r) <= 4.0 * std::numeric_limits<double>::epsilon() * tau) break;
  }
  return u;
}

double log_f_of_u(double epsilon, double u) { return 2.0 * (std::log(epsilon) + log_cosh(u)); }

double log_f_of_t(double epsilon, double t) {
  return log_f_of_u(epsilon, u_of_t(epsilon, std::fabs(t)));
}

double eps_sinh_u(double epsilon, double u) {
  if (std::fabs(u) < 350.0) return epsilon * std::sinh(u);
  const double s = u > 0 ? 1.0 : -1.0;
  return s * std::exp(std::fabs(u) + std::log(epsilon / 2.0));
}

double log_norm_integrand(const CollarParams& p, int a, double t) {
  // extended by zero outside the collar so window and tail probes stay total
  if (!(std::fabs(t) < half_period(p.epsilon))) return -kInf;
  return log_prefactor(p.k) + 2.0 * a * t - p.k * log_f_of_t(p.epsilon, t);
}

double dlog_norm_integrand(const CollarParams& p, int a, double t) {
  if (!(std::fabs(t) < half_period(p.epsilon))) return t > 0 ? -kInf : kInf;
  return 2.0 * a - 2.0 * p.k * eps_sinh_u(p.epsilon, u_of_t(p.epsilon, t));
}

double maximizer_u(const CollarParams& p, int a) {
  return std::asinh(static_cast<double>(a) / (p.k * p.epsilon));
}

double maximizer_t(const CollarParams& p, int a) { return t_of_u(p.epsilon, maximizer_u(p, a)); }

double AnchoredIntegrand::operator()(double t) const {
  if (!(std::fabs(t) < half_period(params.epsilon))) return -kInf;
  // t - t_star is a correctly rounded small difference; log f stays O(1)
  return 2.0 * a * (t - t_star) - params.k * (log_f_of_t(params.epsilon, t) - log_f_star);
}

double AnchoredIntegrand::slope(double t) const { return dlog_norm_integrand(params, a, t); }

AnchoredIntegrand anchored_norm_integrand(const CollarParams& p, int a) {
  AnchoredIntegrand g;
  g.params = p;
  g.a = a;
  g.t_star = maximizer_t(p, a);
  g.log_f_star = log_f_of_u(p.epsilon, maximizer_u(p, a));
  g.anchor = log_norm_integrand(p, a, g.t_star);
  return g;
}

namespace {

// Lemma-based truncation: walk outward from the maximizer in unit u-steps
// until the tail bound e^{G(T)}/|G'(T)| is negligible against the peak
// (everything relative to the anchor).
double truncation_t(const AnchoredIntegrand& g, double u_star, double peak_rel,
                    double rel_tol, int direction) {
  const double target = peak_rel + std::log(rel_tol) - 3.0 * std::numbers::ln2;
  for (int j = 1; j <= 400; ++j) {
    const double t = t_of_u(g.params.epsilon, u_star + direction * j);
    const double dg = g.slope(t);
    if (direction * dg < 0.0) {
      const double bound = g(t) - std::log(std::fabs(dg));
      if (bound <= target) return t;
    }
  }
  throw Error(errc::no_convergence, "collar norm: truncation walk did not terminate");
}

}  // namespace

XReal norm(const CollarParams& p, int a, const quad::QuadSpec& spec) {
  p.validate();
  if (std::abs(a) > p.cutoff())
    throw Error(errc::bad_argument, "collar norm: index beyond cutoff");
  const AnchoredIntegrand g = anchored_norm_integrand(p, a);
  const double u_star = maximizer_u(p, a);
  const double f_star = std::exp(g.log_f_star);
  const double peak_rel = 0.5 * std::log(std::numbers::pi / (p.k * f_star));
  const double t_lo = truncation_t(g, u_star, peak_rel, spec.rel_tol, -1);
  const double t_hi = truncation_t(g, u_star, peak_rel, spec.rel_tol, +1);
  const XReal reduced = quad::integrate_log(g, t_lo, t_hi, spec);
  return XReal::from_log(g.anchor + reduced.logmag());
}

double norm_mass_outside(const CollarParams& p, int a, double halfwidth,
                         const quad::QuadSpec& spec) {
  p.validate();
  const AnchoredIntegrand g = anchored_norm_integrand(p, a);
  return 1.0 - laplace::window_mass_fraction(g, g.t_star, halfwidth, spec);
}

laplace::LaplaceResult norm_laplace(const CollarParams& p, int a) {
  p.validate();
  if (std::abs(a) > p.cutoff())
    throw Error(errc::bad_argument, "collar norm: index beyond cutoff");
  const double t_star = maximizer_t(p, a);
  auto g = [&p, a](double t) { return log_norm_integrand(p, a, t); };
  auto g2 = [&p](double t) { return -2.0 * p.k * std::exp(log_f_of_t(p.epsilon, t)); };
  return laplace::laplace_estimate(g, g2, t_star);
}

const XReal& SectionNorms::at(int a) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), a,
                                   [](const auto& e, int key) { return e.first < key; });
  if (it == entries.end() || it->first != a)
    throw Error(errc::bad_argument, "collar norms: index not in family");
  return it->second;
}

SectionNorms build_norms(const CollarParams& p, const quad::QuadSpec& spec) {
  p.validate();
  SectionNorms out;
  out.params = p;
  const int cut = p.cutoff();
  out.entries.reserve(2 * cut + 1);
  for (int a = -cut; a <= cut; ++a) out.entries.emplace_back(a, norm(p, a, spec));
  return out;
}

namespace {

// One-sided certified tail for the density sum.  dir = +1 bounds the terms
// beyond the largest index, dir = -1 those below the smallest; the term
// ratio e^{+-2t} I_a / I_{a+-1} is decreasing in |a| (the norm ratios grow
// like e^{pi/epsilon}), so the edge ratio dominates every further one.
XReal density_tail_bound(const SectionNorms& n, double t, int dir) {
  const std::size_t last = n.entries.size() - 1;
  const auto& edge = dir > 0 ? n.entries[last] : n.entries[0];
  const auto& prev = dir > 0 ? n.entries[last - 1] : n.entries[1];
  const double edge_term = 2.0 * edge.first * t - edge.second.logmag();
  const double prev_term = 2.0 * prev.first * t - prev.second.logmag();
  const double r = std::exp(edge_term - prev_term);  // estimate of the next ratio
  if (!(r < 0.5))
    throw Error(errc::tail_not_certified, "collar density: tail not certified (cutoff too small)");
  return XReal::from_log(edge_term + std::log(2.0 * r / (1.0 - r)));
}

}  // namespace

XReal density(const SectionNorms& n, double t) {
  const CollarParams& p = n.params;
  const double hp = half_period(p.epsilon);
  if (!(std::fabs(t) < hp)) throw Error(errc::out_of_domain, "collar density: outside collar range");
  if (n.entries.size() < 2)
    throw Error(errc::bad_argument, "collar density: family too small");
  const double lf = log_f_of_t(p.epsilon, t);
  XReal sum = XReal::zero();
  for (const auto& [a, norm_a] : n.entries)
    sum = sum + XReal::from_log(2.0 * a * t - norm_a.logmag());
  const XReal tail = density_tail_bound(n, t, +1) + density_tail_bound(n, t, -1);
  if (!tail.is_zero() && tail.logmag() > sum.logmag() + std::log(1e-12))
    throw Error(errc::tail_not_certified, "collar density: tail not certified (cutoff too small)");
  const XReal frame = XReal::from_log((p.k + 1) * (std::numbers::ln2 - lf));
  return frame * sum;
}

XReal density(const CollarParams& p, double t, const quad::QuadSpec& spec) {
  return density(build_norms(p, spec), t);
}

CutTailReport cut_tail_check(const SectionNorms& norms) {
  const CollarParams& p = norms.params;
  if (p.epsilon > 1e-2)
    throw Error(errc::bad_argument, "cut_tail_check: requires epsilon <= 1e-2");
  const double log_eps = std::log(p.epsilon);
  const double cosh_lo = -1.0 / (2.0 * p.epsilon * log_eps);
  const double cosh_hi = -1.0 / (p.epsilon * log_eps);
  if (!(cosh_lo >= 1.0)) throw Error(errc::empty_region, "cut_tail_check: empty region");
  CutTailReport r;
  r.u_lo = std::acosh(cosh_lo);
  r.u_hi = std::acosh(cosh_hi);
  r.bound = XReal::from_log(log_eps + 2.0 * p.k * std::log(-log_eps / p.k));
  r.density_sup = XReal::zero();
  constexpr int kGrid = 64;
  for (int i = 0; i < kGrid; ++i) {
    const double u = r.u_lo + (r.u_hi - r.u_lo) * i / (kGrid - 1);
    const XReal rho = density(norms, t_of_u(p.epsilon, u));
    if (r.density_sup < rho) r.density_sup = rho;
  }
  r.pass = r.density_sup < r.bound;
  return r;
}

CutTailReport cut_tail_check(const CollarParams& p, const quad::QuadSpec& spec) {
  return cut_tail_check(build_norms(p, spec));
}

CuspComparison cusp_comparison(double epsilon, double u) {
  if (!(u > 0.0)) throw Error(errc::bad_argument, "cusp_comparison: requires u > 0");
  CuspComparison c;
  c.tau = 0.5 / (epsilon * std::cosh(u));
  const double th = std::tanh(u);
  c.distortion = th * th;
  return c;
}

}  // namespace bergman::collar
