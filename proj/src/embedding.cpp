#include "bergman/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman::embedding {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SectionFamily build_family(const collar::CollarParams& p, const quad::QuadSpec& spec) {
  return collar::build_norms(p, spec);
}

std::vector<std::pair<int, XReal>> weights_at(const SectionFamily& family, double t) {
  const collar::CollarParams& p = family.params;
  if (!(std::fabs(t) < collar::half_period(p.epsilon)))
    throw Error(errc::out_of_domain, "weights_at: outside collar range");
  std::vector<double> logs;
  logs.reserve(family.entries.size());
  double m = -kInf;
  for (const auto& [a, sqnorm] : family.entries) {
    logs.push_back(2.0 * a * t - sqnorm.logmag());
    m = std::max(m, logs.back());
  }
  double denom = 0.0;
  for (double lg : logs) denom += std::exp(lg - m);
  const double log_denom = m + std::log(denom);
  std::vector<std::pair<int, XReal>> w;
  w.reserve(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i)
    w.emplace_back(family.entries[i].first, XReal::from_log(logs[i] - log_denom));
  return w;
}

XReal circle_image_length(const SectionFamily& family, double t) {
  const auto w = weights_at(family, t);
  double mean = 0.0;
  for (const auto& [a, wa] : w) mean += a * wa.to_double();
  // Var(a) = sum_a w_a (a - mean)^2, summed in the log domain term by term so
  // weights far below double range still register.
  XReal var = XReal::zero();
  for (const auto& [a, wa] : w) {
    const double d = a - mean;
    if (d == 0.0 || wa.is_zero()) continue;
    var = var + XReal::from_log(wa.logmag() + 2.0 * std::log(std::fabs(d)));
  }
  if (var.is_zero()) return XReal::zero();
  return XReal::from_log(std::log(2.0 * std::numbers::pi) + 0.5 * var.logmag());
}

ReducedMap reduced_map(const SectionFamily& family) {
  const collar::CollarParams& p = family.params;
  ReducedMap r;
  r.c_numeric = XReal::from_log(0.5 * (family.at(0).logmag() - family.at(1).logmag()));
  r.c_paper = XReal::from_log(-collar::half_period(p.epsilon) -
                              (p.k + 0.5) * std::log(p.epsilon * p.k));
  return r;
}

ReducedMap reduced_map(const collar::CollarParams& p, const quad::QuadSpec& spec) {
  p.validate();
  ReducedMap r;
  const XReal i0 = collar::norm(p, 0, spec);
  const XReal i1 = collar::norm(p, 1, spec);
  r.c_numeric = XReal::from_log(0.5 * (i0.logmag() - i1.logmag()));
  r.c_paper = XReal::from_log(-collar::half_period(p.epsilon) -
                              (p.k + 0.5) * std::log(p.epsilon * p.k));
  return r;
}

double line_distance(const std::vector<std::pair<int, XReal>>& weights,
                     std::pair<int, int> pair) {
  bool seen1 = false, seen2 = false;
  XReal residual = XReal::zero();
  for (const auto& [a, wa] : weights) {
    if (a == pair.first) seen1 = true;
    else if (a == pair.second) seen2 = true;
    else residual = residual + wa.abs();
  }
  if (!seen1 || !seen2)
    throw Error(errc::bad_argument, "line_distance: pair index absent from weights");
  const double res = std::min(1.0, residual.to_double());
  return std::asin(std::sqrt(res));
}

double bubble_t0(const collar::CollarParams& p) {
  return collar::half_period(p.epsilon) + std::log(p.epsilon);
}

std::vector<ProfileRow> bubble_profile(const SectionFamily& family, int n_samples) {
  const collar::CollarParams& p = family.params;
  if (n_samples < 3) throw Error(errc::bad_argument, "bubble_profile: n_samples must be >= 3");
  const double t0 = bubble_t0(p);
  if (!(t0 > 0.0)) throw Error(errc::bad_argument, "bubble_profile: epsilon too large (t0 <= 0)");
  const double log_c = 0.5 * (family.at(0).logmag() - family.at(1).logmag());

  std::vector<ProfileRow> rows;
  rows.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    ProfileRow row;
    row.t = t0 * i / (n_samples - 1);
    auto w = weights_at(family, row.t);
    row.circle_length = circle_image_length(family, row.t);
    row.reduced_coordinate = XReal::from_log(row.t + log_c);
    row.line_distance = line_distance(w, {0, 1});
    std::stable_sort(w.begin(), w.end(), [](const auto& x, const auto& y) {
      if (!(x.second == y.second)) return y.second < x.second;
      return x.first < y.first;
    });
    for (std::size_t j = 0; j < 3 && j < w.size(); ++j)
      row.top_weights[j] = {w[j].first, w[j].second.to_double()};
    rows.push_back(row);
  }
  return rows;
}

std::vector<ProfileRow> bubble_profile(const collar::CollarParams& p, int n_samples,
                                       const quad::QuadSpec& spec) {
  return bubble_profile(build_family(p, spec), n_samples);
}

}  // namespace bergman::embedding
