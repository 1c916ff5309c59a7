#include <cmath>
#include <cstdint>
#include <numbers>

#include "bergman/punctured.hpp"
#include "doctest.h"

using bergman::XReal;
using namespace bergman::punctured;

namespace {

// exact rational oracle for the closed form: 2^{k+2} (2k)! / (2a)^{2k+1},
// then times pi in the log
double oracle_log_norm(int k, int a) {
  long double num = std::pow(2.0L, k + 2);
  for (int i = 2; i <= 2 * k; ++i) num *= i;
  long double den = 1.0L;
  for (int i = 0; i < 2 * k + 1; ++i) den *= 2.0L * a;
  return static_cast<double>(std::log(num / den)) + std::log(std::numbers::pi);
}

}  // namespace

TEST_CASE("closed-form norms at small parameters") {
  // k=1,a=1 -> 2 pi; k=2,a=1 -> 12 pi; k=1,a=2 -> pi/4
  CHECK(norm_exact(1, 1).logmag() == doctest::Approx(1.8378770664093454836).epsilon(1e-15));
  CHECK(norm_exact(2, 1).logmag() == doctest::Approx(3.6296365356374004844).epsilon(1e-15));
  CHECK(norm_exact(1, 2).logmag() == doctest::Approx(-0.24156447527049044469).epsilon(1e-13));
  for (int k = 1; k <= 6; ++k)
    for (int a = 1; a <= 12; ++a)
      CHECK(std::fabs(norm_exact(k, a).logmag() - oracle_log_norm(k, a)) <= 1e-12);
}

TEST_CASE("non-integrable index is rejected") {
  CHECK_THROWS_WITH_AS(norm_exact(1, 0), doctest::Contains("non-integrable"), bergman::Error);
  CHECK_THROWS_AS(norm_exact(1, -3), bergman::Error);
  CHECK_THROWS_AS(norm_quad(2, 0), bergman::Error);
  CHECK_THROWS_AS(norm_exact(0, 1), bergman::Error);
}

TEST_CASE("quadrature route matches the closed form") {
  for (auto [k, a] : {std::pair{1, 1}, {5, 3}, {6, 12}, {3, 7}}) {
    const double rel =
        std::fabs(std::expm1(norm_quad(k, a).logmag() - norm_exact(k, a).logmag()));
    CHECK(rel <= 1e-10);
  }
}

TEST_CASE("density terms agree with the per-section route") {
  // term_a == (2 tau^2)^{k+1} e^{-2 a tau} / Y_a, identically in a
  const int k = 3;
  const double tau = 2.5;
  for (int a = 1; a <= 12; ++a) {
    const double section_route =
        (k + 1) * std::log(2.0 * tau * tau) - 2.0 * a * tau - norm_exact(k, a).logmag();
    CHECK(std::fabs(log_density_term(k, a, tau) - section_route) <= 1e-12);
  }
}

TEST_CASE("density term ratio at tau = k") {
  // term_2/term_1 = 2^{2k+1} e^{-2k};  k=3: 128 e^{-6} = 0.31728027861329388
  const int k = 3;
  const double ratio = std::exp(log_density_term(k, 2, 3.0) - log_density_term(k, 1, 3.0));
  CHECK(ratio == doctest::Approx(0.31728027861329388).epsilon(1e-13));
}

TEST_CASE("each density term integrates to one against the volume form") {
  for (auto [k, a] : {std::pair{3, 1}, {3, 4}, {2, 2}}) {
    const double rel =
        std::fabs(std::expm1(norm_quad(k, a).logmag() - norm_exact(k, a).logmag()));
    CHECK(rel <= 1e-10);  // unit norm by construction
  }
}

TEST_CASE("term weights sum to one") {
  const auto w = term_weights(4, 1.2);
  double sum = 0.0;
  for (const auto& [a, wa] : w) sum += wa;
  CHECK(std::fabs(sum - 1.0) <= 1e-12);
}

TEST_CASE("dominant index: a=1 beyond tau = k, ~ k/tau inside") {
  auto argmax = [](int k, double tau) {
    const auto w = term_weights(k, tau);
    int best = w.front().first;
    double best_w = w.front().second;
    for (const auto& [a, wa] : w)
      if (wa > best_w) {
        best = a;
        best_w = wa;
      }
    return best;
  };
  for (double tau : {3.0, 5.0, 30.0}) CHECK(argmax(3, tau) == 1);
  for (double tau : {0.5, 1.0, 2.0}) {
    const int k = 8;
    CHECK(std::abs(argmax(k, tau) - static_cast<int>(std::lround(k / tau))) <= 1);
  }
}

TEST_CASE("density is positive and strictly decreasing beyond the a=1 peak") {
  // each term tau^{2k+2} e^{-2 a tau} still rises until tau = (k+1)/a, so
  // monotone decay starts at k+1, not at k
  const int k = 3;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    const double tau = (k + 1) + (10.0 * k - (k + 1)) * i / 63.0;
    const XReal rho = density(k, tau);
    CHECK(rho.sign() == 1);
    CHECK(rho.logmag() < prev);
    prev = rho.logmag();
  }
  CHECK(density(k, 3.2).logmag() > density(k, 3.0).logmag());  // rising side
}

TEST_CASE("default cutoff honors its floor and certifies the tail") {
  CHECK(default_cutoff(3, 3.0) >= 12);
  CHECK(default_cutoff(2, 0.7) >= 8);
  // a cutoff far below the certification point must be refused
  CHECK_THROWS_WITH_AS(density(3, 0.3, 2), doctest::Contains("tail not certified"),
                       bergman::Error);
  CHECK_THROWS_AS(density(3, -1.0, 0), bergman::Error);
}
