#include "bergman/punctured.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman::punctured {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_k(int k) {
  if (k < 1) throw Error(errc::bad_argument, "punctured: k must be >= 1");
}

void check_a(int a) {
  if (a < 1) throw Error(errc::bad_argument, "punctured: non-integrable index (a must be >= 1)");
}

double log_prefactor(int k) { return (k + 2) * std::numbers::ln2 + std::log(std::numbers::pi); }

// term ratio of the density series, term(a+1)/term(a) = ((a+1)/a)^{2k+1} e^{-2 tau}
double term_ratio(int k, int a, double tau) {
  return std::exp((2 * k + 1) * std::log1p(1.0 / a) - 2.0 * tau);
}

}  // namespace

double log_norm_integrand(int k, int a, double tau) {
  if (tau <= 0.0) return -kInf;
  return log_prefactor(k) - 2.0 * a * tau + 2.0 * k * std::log(tau);
}

double dlog_norm_integrand(int k, int a, double tau) { return -2.0 * a + 2.0 * k / tau; }

XReal norm_exact(int k, int a) {
  check_k(k);
  check_a(a);
  const double lg = log_prefactor(k) + log_factorial(2 * k) -
                    (2 * k + 1) * std::log(2.0 * a);
  return XReal::from_log(lg);
}

XReal norm_quad(int k, int a, const quad::QuadSpec& spec) {
  check_k(k);
  check_a(a);
  const double tau_star = static_cast<double>(k) / a;
  auto g = [k, a](double tau) { return log_norm_integrand(k, a, tau); };
  auto dg = [k, a](double tau) { return dlog_norm_integrand(k, a, tau); };
  const XReal head = quad::integrate_log(g, 0.0, tau_star, spec);
  const XReal tail = quad::integrate_log_halfline(g, dg, tau_star, spec);
  return head + tail;
}

laplace::LaplaceResult norm_laplace(int k, int a) {
  check_k(k);
  check_a(a);
  auto dg = [k, a](double tau) { return dlog_norm_integrand(k, a, tau); };
  const double tau_star = static_cast<double>(k) / a;
  const double t = laplace::maximize_concave(dg, tau_star / 16.0, tau_star * 16.0);
  auto g = [k, a](double tau) { return log_norm_integrand(k, a, tau); };
  auto g2 = [k](double tau) { return -2.0 * k / (tau * tau); };
  return laplace::laplace_estimate(g, g2, t);
}

double log_density_term(int k, int a, double tau) {
  // (2^{2k} tau^{2k+2} / (pi (2k)!)) * a^{2k+1} e^{-2 a tau}
  if (tau <= 0.0) throw Error(errc::bad_argument, "punctured density: tau must be > 0");
  return 2 * k * std::numbers::ln2 + (2 * k + 2) * std::log(tau) - std::log(std::numbers::pi) -
         log_factorial(2 * k) + (2 * k + 1) * std::log(static_cast<double>(a)) - 2.0 * a * tau;
}

int default_cutoff(int k, double tau) {
  check_k(k);
  if (!(tau > 0.0)) throw Error(errc::bad_argument, "punctured density: tau must be > 0");
  const int floor_a = std::max(4 * k, 8);
  XReal partial = XReal::zero();
  for (int a = 1; a <= 2'000'000; ++a) {
    partial = partial + XReal::from_log(log_density_term(k, a, tau));
    if (a < floor_a) continue;
    const double r = term_ratio(k, a, tau);
    if (r >= 0.5) continue;
    const XReal bound = XReal::from_log(log_density_term(k, a, tau) + std::log(r / (1.0 - r)));
    if (bound.logmag() <= partial.logmag() + std::log(1e-12)) return a;
  }
  throw Error(errc::tail_not_certified, "punctured density: no certifiable cutoff found");
}

XReal density(int k, double tau, int cutoff_a) {
  check_k(k);
  if (!(tau > 0.0)) throw Error(errc::bad_argument, "punctured density: tau must be > 0");
  const int cutoff = cutoff_a > 0 ? cutoff_a : default_cutoff(k, tau);
  XReal sum = XReal::zero();
  for (int a = 1; a <= cutoff; ++a) sum = sum + XReal::from_log(log_density_term(k, a, tau));
  const double r = term_ratio(k, cutoff, tau);
  if (r >= 0.5)
    throw Error(errc::tail_not_certified, "punctured density: tail not certified (cutoff too small)");
  const XReal tail_bound =
      XReal::from_log(log_density_term(k, cutoff, tau) + std::log(r / (1.0 - r)));
  if (tail_bound.logmag() > sum.logmag() + std::log(1e-12))
    throw Error(errc::tail_not_certified, "punctured density: tail not certified (cutoff too small)");
  return sum;
}

std::vector<std::pair<int, double>> term_weights(int k, double tau, int cutoff_a) {
  check_k(k);
  if (!(tau > 0.0)) throw Error(errc::bad_argument, "punctured density: tau must be > 0");
  const int cutoff = cutoff_a > 0 ? cutoff_a : default_cutoff(k, tau);
  density(k, tau, cutoff);  // runs the tail certification
  std::vector<double> logs(cutoff);
  double m = -kInf;
  for (int a = 1; a <= cutoff; ++a) {
    logs[a - 1] = log_density_term(k, a, tau);
    m = std::max(m, logs[a - 1]);
  }
  double denom = 0.0;
  for (double lg : logs) denom += std::exp(lg - m);
  std::vector<std::pair<int, double>> w;
  w.reserve(cutoff);
  for (int a = 1; a <= cutoff; ++a) w.emplace_back(a, std::exp(logs[a - 1] - m) / denom);
  return w;
}

}  // namespace bergman::punctured
