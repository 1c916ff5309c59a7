#include <cmath>
#include <numbers>
#include <random>

#include "bergman/audit.hpp"
#include "bergman/embedding.hpp"
#include "doctest.h"

using bergman::XReal;
using namespace bergman::embedding;
namespace collar = bergman::collar;

namespace {

SectionFamily two_section_family(double r) {
  // weights at t=0: w_1/w_0 = r^2
  SectionFamily fam;
  fam.params = {1e-2, 1, 2};
  fam.entries.emplace_back(0, XReal::one());
  fam.entries.emplace_back(1, XReal::from_log(-2.0 * std::log(r)));
  return fam;
}

}  // namespace

TEST_CASE("weights sum to one and pick the expected leader") {
  const collar::CollarParams p{1e-3, 3, 0};
  const SectionFamily fam = build_family(p);
  const auto w0 = weights_at(fam, 0.0);
  XReal sum = XReal::zero();
  for (const auto& [a, wa] : w0) sum = sum + wa;
  CHECK(std::fabs(std::expm1(sum.logmag())) <= 1e-12);
  const auto get = [](const auto& w, int a) {
    for (const auto& [ai, wi] : w)
      if (ai == a) return wi;
    return XReal::zero();
  };
  // t = 0: a = 0 dominates everything
  for (const auto& [a, wa] : w0)
    if (a != 0) CHECK(wa < get(w0, 0));
  // t = t_1: weight_1 > weight_0
  const auto w1 = weights_at(fam, collar::maximizer_t(p, 1));
  CHECK(get(w1, 0) < get(w1, 1));
}

TEST_CASE("single-section family has a point image") {
  SectionFamily fam;
  fam.params = {1e-2, 1, 1};
  fam.entries.emplace_back(0, XReal::one());
  CHECK(circle_image_length(fam, 0.3).is_zero());
}

TEST_CASE("two-section circle length is the exact chart value") {
  // circle of radius r in the affine chart: length = 2 pi r / (1 + r^2)
  for (double r : {1e-3, 0.5, 1.0, 2.0, 100.0}) {
    const double len = circle_image_length(two_section_family(r), 0.0).to_double();
    CHECK(len == doctest::Approx(2.0 * std::numbers::pi * r / (1.0 + r * r)).epsilon(1e-12));
  }
}

TEST_CASE("variance route equals the direct Fubini-Study pullback") {
  std::mt19937 rng(4242u);
  std::uniform_real_distribution<double> log_dist(-6.0, 6.0), t_dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    SectionFamily fam;
    fam.params = {1e-2, 1, 3};
    std::vector<std::pair<int, double>> raw;
    for (int a = -1; a <= 2; ++a) {
      const double lg = log_dist(rng);
      fam.entries.emplace_back(a, XReal::from_log(lg));
      raw.emplace_back(a, lg);
    }
    const double t = t_dist(rng);
    const double len = circle_image_length(fam, t).to_double();
    const double direct = bergman::audit::fs_pullback_circle_length(raw, t);
    CHECK(std::fabs(len / direct - 1.0) <= 1e-6);
  }
}

TEST_CASE("geodesic image length matches 2 pi sqrt(2 I_0 / I_1)") {
  const collar::CollarParams p{1e-3, 3, 0};
  const SectionFamily fam = build_family(p);
  const XReal len = circle_image_length(fam, 0.0);
  const double target = std::log(2.0 * std::numbers::pi) +
                        0.5 * (std::numbers::ln2 + fam.at(0).logmag() - fam.at(1).logmag());
  CHECK(std::fabs(std::expm1(len.logmag() - target)) <= 0.01);
}

TEST_CASE("reduced map: printed asymptotic and quadrature offset") {
  const collar::CollarParams p{1e-3, 3, 0};
  const ReducedMap r = reduced_map(p);
  // paper coefficient: -pi/(2 eps) - 3.5 log(3e-3) = -1550.4643263287975
  CHECK(r.c_paper.logmag() == doctest::Approx(-1550.4643263287975).epsilon(1e-12));
  CHECK(r.c_numeric.logmag() < -1000.0);  // -> 0 as eps -> 0
  // the two routes differ by ~k (plus a Stirling-type correction -0.0277)
  const double offset = r.c_numeric.logmag() - r.c_paper.logmag();
  CHECK(std::fabs(offset - 2.9723220743150017) <= 0.02);
}

TEST_CASE("reduced-map offset converges along the epsilon sweep") {
  const double limit = 2.9723220743150017;  // k + (ln c0 - ln c1)/2 at k=3
  double prev = std::numeric_limits<double>::infinity();
  double c_prev = 0.0;
  bool first = true;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const collar::CollarParams p{eps, 3, 2};
    const ReducedMap r = reduced_map(p);
    const double offset = r.c_numeric.logmag() - r.c_paper.logmag();
    CHECK(std::fabs(offset - limit) < prev + 1e-12);
    prev = std::fabs(offset - limit);
    // c_numeric itself collapses
    if (!first) CHECK(r.c_numeric.logmag() < c_prev);
    c_prev = r.c_numeric.logmag();
    first = false;
  }
  CHECK(prev <= 1e-4);  // at eps = 1e-4 the offset has essentially converged
}

TEST_CASE("distance to a coordinate line") {
  using W = std::vector<std::pair<int, XReal>>;
  const W on_pair{{0, XReal::from_double(0.7)}, {1, XReal::from_double(0.3)}};
  CHECK(line_distance(on_pair, {0, 1}) == doctest::Approx(0.0));
  const W off_pair{{0, XReal::zero()}, {1, XReal::zero()}, {2, XReal::one()}};
  CHECK(line_distance(off_pair, {0, 1}) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(line_distance(on_pair, {0, 2}), doctest::Contains("absent"),
                       bergman::Error);
}

TEST_CASE("mid-bubble samples stay near the (0,1) coordinate line") {
  const collar::CollarParams p{1e-3, 3, 0};
  const SectionFamily fam = build_family(p);
  const double t_mid = collar::maximizer_t(p, 1) / 2.0;
  const double d = line_distance(weights_at(fam, t_mid), {0, 1});
  CHECK(d <= 10.0 * p.k * p.k * p.epsilon);
}

TEST_CASE("profile mirrors under t -> -t, a -> -a") {
  const collar::CollarParams p{1e-2, 2, 0};
  const SectionFamily fam = build_family(p);
  for (double t : {0.0, 30.0, 120.0}) {
    const auto wp = weights_at(fam, t), wm = weights_at(fam, -t);
    for (std::size_t i = 0; i < wp.size(); ++i) {
      const auto& [a, w_pos] = wp[i];
      const auto& [ma, w_neg] = wm[wp.size() - 1 - i];
      CHECK(ma == -a);
      if (!w_pos.is_zero())
        CHECK(std::fabs(w_pos.logmag() - w_neg.logmag()) <= 1e-9);
    }
  }
}

TEST_CASE("bubble profile rows") {
  const collar::CollarParams p{1e-3, 3, 0};
  const SectionFamily fam = build_family(p);
  const double t0 = bubble_t0(p);
  CHECK(t0 == doctest::Approx(1563.8885715159145).epsilon(1e-12));
  const auto rows = bubble_profile(fam, 9);
  REQUIRE(rows.size() == 9);
  CHECK(rows.front().t == 0.0);
  CHECK(rows.back().t == doctest::Approx(t0));
  for (const auto& row : rows) {
    CHECK(row.line_distance >= 0.0);
    CHECK(row.line_distance <= std::numbers::pi / 2);
    CHECK(row.top_weights[0].second >= row.top_weights[1].second);
    CHECK(row.top_weights[1].second >= row.top_weights[2].second);
  }
  // reduced coordinate: tiny at the geodesic, huge at the bubble edge
  CHECK(rows.front().reduced_coordinate.logmag() < -1000.0);
  CHECK(rows.back().reduced_coordinate.logmag() > 10.0);
  // paper-map substitution at t0: log|w| = log eps - (k+1/2) log(eps k)
  const double paper_sub = std::log(p.epsilon) - (p.k + 0.5) * std::log(p.epsilon * p.k);
  CHECK(paper_sub == doctest::Approx(13.424245187116959).epsilon(1e-12));
  const double c_paper_log = -collar::half_period(p.epsilon) -
                             (p.k + 0.5) * std::log(p.epsilon * p.k);
  CHECK(t0 + c_paper_log == doctest::Approx(paper_sub).epsilon(1e-9));
  // the numeric route carries the extra ~e^k
  CHECK(std::fabs(rows.back().reduced_coordinate.logmag() - paper_sub - 2.9723220743150017) <=
        0.01);
}

TEST_CASE("bubble edge length collapses along the sweep") {
  // paper scale at t0: 2 pi eps^{-1} (eps k)^{k+1/2}; log = -11.586 at 1e-3
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const collar::CollarParams p{eps, 3, 0};
    const SectionFamily fam = build_family(p);
    const double len_log = circle_image_length(fam, bubble_t0(p)).logmag();
    CHECK(len_log < prev);
    prev = len_log;
    const double paper = std::log(2.0 * std::numbers::pi) - std::log(eps) +
                         (p.k + 0.5) * std::log(eps * p.k);
    if (eps == 1e-3) CHECK(paper == doctest::Approx(-11.586368120707613).epsilon(1e-12));
    CHECK(std::fabs(len_log - paper) <= p.k + 0.5);  // paper route omits ~e^{-k}
  }
}

TEST_CASE("profile input validation") {
  const collar::CollarParams p{1e-2, 2, 0};
  const SectionFamily fam = build_family(p);
  CHECK_THROWS_AS(bubble_profile(fam, 2), bergman::Error);
  CHECK_THROWS_AS(weights_at(fam, collar::half_period(p.epsilon)), bergman::Error);
}
