#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/collar.hpp"
#include "doctest.h"

using bergman::XReal;
using namespace bergman::collar;

namespace {
// exact value of I_0: the a=0 integrand reduces to a sech moment, so
// I_0 = 2^{k+2} pi eps^{-2k-1} sqrt(pi) Gamma(k+1/2)/Gamma(k+1) for every eps
double oracle_log_norm_a0(double eps, int k) {
  return (k + 2) * std::numbers::ln2 + std::log(std::numbers::pi) -
         (2 * k + 1) * std::log(eps) + 0.5 * std::log(std::numbers::pi) +
         std::lgamma(k + 0.5) - std::lgamma(k + 1.0);
}
}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((CollarParams{0.2, 3, 0}.validate()), bergman::Error);
  CHECK_THROWS_AS((CollarParams{-1e-3, 3, 0}.validate()), bergman::Error);
  CHECK_THROWS_AS((CollarParams{0.0, 3, 0}.validate()), bergman::Error);
  CHECK_THROWS_AS((CollarParams{0.1, 5, 0}.validate()), bergman::Error);  // eps*k >= 0.5
  CHECK_THROWS_AS((CollarParams{1e-3, 0, 0}.validate()), bergman::Error);
  CHECK_NOTHROW((CollarParams{1e-3, 3, 0}.validate()));
  CHECK((CollarParams{1e-3, 3, 0}.cutoff()) == 12);
  CHECK((CollarParams{1e-3, 1, 0}.cutoff()) == 8);
  CHECK((CollarParams{1e-3, 3, 5}.cutoff()) == 5);
}

TEST_CASE("coordinate change: center and oddness") {
  CHECK(t_of_u(1e-2, 0.0) == 0.0);
  CHECK(u_of_t(1e-2, 0.0) == 0.0);
  for (double u : {0.3, 1.0, 7.5}) CHECK(t_of_u(1e-2, -u) == -t_of_u(1e-2, u));
}

TEST_CASE("coordinate change at eps=0.01, u=10") {
  // 50-digit reference: tau = 0.009079985946258555, t = 157.07055269354340
  const double eps = 1e-2;
  CHECK(tau_from_u(eps, 10.0) == doctest::Approx(0.0090799859462585550).epsilon(1e-14));
  CHECK(t_of_u(eps, 10.0) == doctest::Approx(157.07055269354340337).epsilon(1e-14));
  // end expansion: tau ~ 1/(eps (cosh u + 1)) = 0.0090791615471903342
  const double approx = 1.0 / (eps * (std::cosh(10.0) + 1.0));
  CHECK(approx == doctest::Approx(0.0090791615471903342).epsilon(1e-14));
  const double scale = eps / std::pow(eps * (std::cosh(10.0) + 1.0), 2);
  CHECK(std::fabs(tau_from_u(eps, 10.0) - approx) / scale <= 2.0);
}

TEST_CASE("t saturates at the half period as u grows") {
  const double eps = 1e-2;
  const double hp = half_period(eps);
  CHECK(t_of_u(eps, 300.0) == doctest::Approx(hp).epsilon(1e-15));
  CHECK(t_of_u(eps, 300.0) <= hp);
}

TEST_CASE("round trips") {
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    double worst_tau = 0.0, worst_t = 0.0;
    for (double u = -50.0; u <= 50.0; u += 0.5)
      worst_tau = std::max(worst_tau, std::fabs(u_from_tau(eps, tau_from_u(eps, u)) - u));
    for (double u = -12.0; u <= 12.0; u += 0.25)
      worst_t = std::max(worst_t, std::fabs(u_of_t(eps, t_of_u(eps, u)) - u));
    CHECK(worst_tau <= 1e-10);
    CHECK(worst_t <= 1e-10);
    const double hp = half_period(eps);
    for (double frac : {-0.999, -0.6, -0.2, 0.2, 0.6, 0.999}) {
      const double t = frac * hp;
      CHECK(std::fabs(t_of_u(eps, u_of_t(eps, t)) - t) <= 1e-10 * std::max(1.0, std::fabs(t)));
    }
  }
}

TEST_CASE("coordinates outside the collar are rejected") {
  const double eps = 1e-2;
  CHECK_THROWS_WITH_AS(u_of_t(eps, half_period(eps)), doctest::Contains("outside collar"),
                       bergman::Error);
  CHECK_THROWS_AS(u_of_t(eps, -half_period(eps) - 1.0), bergman::Error);
  CHECK_THROWS_AS(u_from_tau(eps, 0.0), bergman::Error);
}

TEST_CASE("metric profile: center value and evenness") {
  const double eps = 1e-3;
  CHECK(log_f_of_t(eps, 0.0) == 2.0 * std::log(eps));  // f(0) = eps^2, exactly
  for (double t : {0.1, 100.0, 1500.0})
    CHECK(log_f_of_t(eps, -t) == log_f_of_t(eps, t));  // even, exactly
}

TEST_CASE("metric profile satisfies (log f)'' = 2 f") {
  // second difference against honest t-spacings; log f sampled on the
  // u-route to keep the half-period subtraction out of the difference
  const double eps = 1e-2, h = 1e-4;
  double worst = 0.0;
  for (double u = -6.0; u <= 6.0 + 1e-9; u += 0.05) {
    const double tm = t_of_u(eps, u - h), t0 = t_of_u(eps, u), tp = t_of_u(eps, u + h);
    const double fm = log_f_of_u(eps, u - h), f0 = log_f_of_u(eps, u),
                 fp = log_f_of_u(eps, u + h);
    const double dm = t0 - tm, dp = tp - t0;
    const double second = 2.0 * (fm * dp - f0 * (dm + dp) + fp * dm) / (dm * dp * (dm + dp));
    worst = std::max(worst, std::fabs(second - 2.0 * std::exp(f0)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("end expansion constant stays below 2") {
  for (double eps : {1e-2, 1e-3}) {
    for (double c : {10.0, 100.0, 1e4, 1e8}) {
      const double u = std::acosh(c);
      const double lhs = std::fabs(tau_from_u(eps, u) - 1.0 / (eps * (c + 1.0)));
      const double scale = eps / std::pow(eps * (c + 1.0), 2);
      CHECK(lhs / scale <= 2.0);
    }
  }
}

TEST_CASE("section norms are symmetric in a") {
  const CollarParams p{1e-2, 2, 6};
  for (int a = 1; a <= 6; ++a) {
    const XReal ip = norm(p, a), im = norm(p, -a);
    CHECK(std::fabs(ip.logmag() - im.logmag()) <= 1e-9);
  }
}

TEST_CASE("norm ratio approximates e^{pi/eps} (a/(a+1))^{2k+1}") {
  const CollarParams p{1e-3, 3, 2};
  const double diff = norm(p, 2).logmag() - norm(p, 1).logmag();
  const double target = std::numbers::pi / p.epsilon + 7.0 * std::log(0.5);  // ~3136.74
  CHECK(target == doctest::Approx(3136.7406233258736).epsilon(1e-12));
  CHECK(std::fabs(diff - target) <= 1e-3);
}

TEST_CASE("a=0 norm against the exact sech-moment value") {
  for (double eps : {1e-2, 1e-3}) {
    for (int k : {1, 3, 4}) {
      const CollarParams p{eps, k, 0};
      const double got = norm(p, 0).logmag();
      CHECK(std::fabs(got - oracle_log_norm_a0(eps, k)) <= 1e-9 * std::fabs(got));
    }
  }
  // second-order approximation from the model: log(2^{k+2} pi^{3/2})
  // + (2k+1) log(1/eps) - (1/2) log k = 52.988 at eps=1e-3, k=3; the exact
  // value 52.946 sits within the O(1/k) band of it
  const CollarParams p{1e-3, 3, 0};
  const double got = norm(p, 0).logmag();
  CHECK(got == doctest::Approx(52.946331817567805).epsilon(1e-10));
  const double model = std::log(32.0 * std::pow(std::numbers::pi, 1.5)) +
                       7.0 * std::log(1e3) - 0.5 * std::log(3.0);
  CHECK(std::fabs(got - model) <= 0.05);
}

TEST_CASE("norm rejects indices beyond the cutoff") {
  const CollarParams p{1e-3, 3, 4};
  CHECK_THROWS_WITH_AS(norm(p, 5), doctest::Contains("beyond cutoff"), bergman::Error);
  CHECK_THROWS_AS(norm(p, -5), bergman::Error);
}

TEST_CASE("laplace route: maximizer and estimate quality") {
  const CollarParams p{1e-3, 3, 0};
  const auto r = norm_laplace(p, 1);
  CHECK(r.t_star == doctest::Approx(t_of_u(p.epsilon, std::asinh(1.0 / (p.k * p.epsilon)))));
  const double ratio = std::exp(r.estimate.logmag() - norm(p, 1).logmag());
  // Stirling-type correction of the k=3 gamma integral: ratio -> 0.9862197
  CHECK(std::fabs(ratio - 0.98621970089192330) <= 1e-3);

  const auto r0 = norm_laplace(p, 0);
  CHECK(r0.t_star == 0.0);
  CHECK(r0.g2_star == doctest::Approx(-2.0 * p.k * p.epsilon * p.epsilon));
}

TEST_CASE("density is even and concentrated on a=0 at the geodesic") {
  const CollarParams p{1e-2, 2, 0};
  const SectionNorms norms = build_norms(p);
  for (double frac : {0.1, 0.5, 0.9}) {
    const double t = frac * half_period(p.epsilon) * 0.5;
    const XReal dp_ = density(norms, t), dm = density(norms, -t);
    CHECK(std::fabs(dp_.logmag() - dm.logmag()) <= 1e-10);
  }
  // at t=0 the a=0 term carries all but ~I_0/I_1 of the sum
  XReal others = XReal::zero();
  for (const auto& [a, na] : norms.entries)
    if (a != 0) others = others + XReal::one() / na;
  const XReal lead = XReal::one() / norms.at(0);
  CHECK((others / lead).logmag() < std::log(3.0) + norms.at(0).logmag() - norms.at(1).logmag());
}

TEST_CASE("two-section dominance across the bubble range") {
  for (double eps : {1e-2, 1e-3}) {
    const CollarParams p{eps, 3, 0};
    const SectionNorms norms = build_norms(p);
    const double t0 = half_period(eps) + std::log(eps);
    for (int i = 0; i <= 8; ++i) {
      const double t = t0 * i / 8.0;
      XReal pair = XReal::zero(), rest = XReal::zero();
      for (const auto& [a, na] : norms.entries) {
        const XReal term = XReal::from_log(2.0 * a * t - na.logmag());
        if (a == 0 || a == 1) pair = pair + term;
        else rest = rest + term;
      }
      CHECK((rest / pair).logmag() <= std::log(p.k * p.k * eps));
    }
  }
}

TEST_CASE("density tail certification refuses tiny cutoffs") {
  const CollarParams p{1e-2, 3, 1};
  const SectionNorms norms = build_norms(p);
  const double t = half_period(p.epsilon) + std::log(p.epsilon);  // bubble edge
  CHECK_THROWS_WITH_AS(density(norms, t), doctest::Contains("tail not certified"),
                       bergman::Error);
}

TEST_CASE("cut-tail region, bound, and verdict at eps=1e-3, k=3") {
  const CollarParams p{1e-3, 3, 0};
  const CutTailReport r = cut_tail_check(p);
  CHECK(std::cosh(r.u_lo) == doctest::Approx(72.382413650541971).epsilon(1e-12));
  CHECK(std::cosh(r.u_hi) == doctest::Approx(144.76482730108394).epsilon(1e-12));
  CHECK(r.bound.logmag() == doctest::Approx(-1.9035606074944023).epsilon(1e-12));
  CHECK(r.pass);
  CHECK(r.density_sup < r.bound);
  CHECK(r.density_sup.sign() == 1);
}

TEST_CASE("cut-tail requires a small epsilon") {
  const CollarParams p{5e-2, 3, 0};
  CHECK_THROWS_AS(cut_tail_check(p), bergman::Error);
}

TEST_CASE("cusp comparison map") {
  const double eps = 1e-3;
  // eps cosh u = 1/k  ->  tau = k/2
  const double u1 = std::acosh(1.0 / (3.0 * eps));
  CHECK(cusp_comparison(eps, u1).tau == doctest::Approx(1.5).epsilon(1e-12));
  // eps cosh u = -1/log eps  ->  tau = -log(eps)/2, distortion 1 - (eps log eps)^2
  const double u2 = std::acosh(-1.0 / (eps * std::log(eps)));
  CHECK(cusp_comparison(eps, u2).tau == doctest::Approx(-std::log(eps) / 2.0).epsilon(1e-12));
  CHECK(cusp_comparison(eps, u2).distortion ==
        doctest::Approx(1.0 - std::pow(eps * std::log(eps), 2)).epsilon(1e-9));
  // distortion increases toward 1
  double prev = 0.0;
  for (double u : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double d = cusp_comparison(eps, u).distortion;
    CHECK(d > prev);
    CHECK(d < 1.0);
    prev = d;
  }
  CHECK_THROWS_AS(cusp_comparison(eps, 0.0), bergman::Error);
}
