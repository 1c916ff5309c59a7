#include "bergman/audit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bergman/collar.hpp"
#include "bergman/embedding.hpp"
#include "bergman/error.hpp"
#include "bergman/laplace.hpp"
#include "bergman/punctured.hpp"
#include "bergman/quadrature.hpp"

namespace bergman::audit {

namespace {

using laplace::Fn;

std::string fmt(const char* pattern, auto... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

XReal xd(double v) { return XReal::from_double(v); }

void add_row(CriterionReport& rep, CheckRow row) {
  rep.pass = rep.pass && row.pass;
  rep.rows.push_back(std::move(row));
}

// --- criterion 1: quadrature matches the closed-form norms -----------------

CriterionReport c1_exact_norm_oracle(double rel_tol) {
  CriterionReport rep{1, "exact-norm-oracle", true, {}};
  for (int k = 1; k <= 6; ++k) {
    for (int a = 1; a <= 12; ++a) {
      const XReal exact = punctured::norm_exact(k, a);
      const XReal q = punctured::norm_quad(k, a, {rel_tol});
      const double rel = std::fabs(std::expm1(q.logmag() - exact.logmag()));
      CheckRow row{fmt("k=%d,a=%d", k, a), rel <= 1e-9, {}, ""};
      row.values = {{"log_exact", exact}, {"log_quad", q}, {"rel_dev", xd(rel)}};
      add_row(rep, std::move(row));
    }
  }
  return rep;
}

// --- criterion 2: second-order estimate against the exact norm -------------

CriterionReport c2_laplace_audit(double) {
  CriterionReport rep{2, "laplace-audit", true, {}};
  const int ks[] = {2, 4, 8, 16};
  double prev = 0.0;
  for (int k : ks) {
    const laplace::LaplaceResult lr = punctured::norm_laplace(k, 1);
    const XReal exact = punctured::norm_exact(k, 1);
    const double ratio = std::exp(lr.estimate.logmag() - exact.logmag());
    const bool in_band = ratio >= 1.0 - 0.1 / k && ratio <= 1.0;
    const bool monotone = ratio > prev;
    CheckRow row{fmt("k=%d,a=1", k), in_band && monotone, {}, ""};
    row.values = {{"ratio", xd(ratio)}, {"band_lo", xd(1.0 - 0.1 / k)}};
    add_row(rep, std::move(row));
    prev = ratio;
  }
  return rep;
}

// --- criterion 3: concavity-lemma bound vs integrated tails ----------------

struct TailCase {
  std::string id;
  Fn f, df;
  double x0;
  bool linear;
};

std::vector<TailCase> tail_suite() {
  std::vector<TailCase> cases;
  const double lin_c[5] = {0.5, 1.0, 2.0, 3.0, 7.0};
  const double lin_b[5] = {0.0, 1.0, -2.0, 0.3, 5.0};
  const double lin_x[5] = {0.0, 1.0, -1.0, 2.0, 10.0};
  for (int i = 0; i < 5; ++i) {
    const double c = lin_c[i], b = lin_b[i];
    cases.push_back({fmt("linear,c=%g", c),
                     [c, b](double x) { return -c * x + b; },
                     [c](double) { return -c; }, lin_x[i], true});
  }
  const double q_s[5] = {1.0, 0.5, 2.0, 3.0, 1.0};
  const double q_m[5] = {0.0, 2.0, -1.0, 0.0, 5.0};
  const double q_x[5] = {1.0, 3.0, 0.0, 0.25, 7.0};
  for (int i = 0; i < 5; ++i) {
    const double s = q_s[i], m = q_m[i];
    cases.push_back({fmt("quadratic,s=%g,m=%g", s, m),
                     [s, m](double x) { return -s * (x - m) * (x - m); },
                     [s, m](double x) { return -2.0 * s * (x - m); }, q_x[i], false});
  }
  const int g_k[5] = {1, 2, 3, 4, 6};
  const int g_a[5] = {1, 1, 2, 1, 3};
  const double g_x[5] = {2.0, 3.0, 2.0, 5.0, 2.5};
  for (int i = 0; i < 5; ++i) {
    const int k = g_k[i], a = g_a[i];
    cases.push_back({fmt("gamma,k=%d,a=%d", k, a),
                     [k, a](double x) { return -2.0 * a * x + 2.0 * k * std::log(x); },
                     [k, a](double x) { return -2.0 * a + 2.0 * k / x; }, g_x[i], false});
  }
  const double c_c[5] = {1.0, 0.5, 2.0, 1.5, 3.0};
  const double c_x[5] = {1.0, 2.0, 0.5, 1.2, 0.8};
  for (int i = 0; i < 5; ++i) {
    const double c = c_c[i];
    cases.push_back({fmt("cosh,c=%g", c),
                     [c](double x) { return -c * std::cosh(x); },
                     [c](double x) { return -c * std::sinh(x); }, c_x[i], false});
  }
  return cases;
}

CriterionReport c3_concavity_lemma(double) {
  CriterionReport rep{3, "concavity-lemma", true, {}};
  const quad::QuadSpec spec{1e-13, 60, 15};
  for (const TailCase& tc : tail_suite()) {
    const XReal bound = laplace::concave_tail_bound(tc.f(tc.x0), tc.df(tc.x0));
    const XReal tail = quad::integrate_log_halfline(tc.f, tc.df, tc.x0, spec);
    bool pass = !(bound < tail) || bound.logmag() >= tail.logmag() - 1e-11;
    if (tc.linear) pass = pass && std::fabs(bound.logmag() - tail.logmag()) <= 1e-12;
    CheckRow row{tc.id, pass, {{"log_bound", bound}, {"log_tail", tail}}, ""};
    add_row(rep, std::move(row));
  }
  return rep;
}

// --- criterion 4: I_a = I_{-a} --------------------------------------------

CriterionReport c4_collar_symmetry(double rel_tol) {
  CriterionReport rep{4, "collar-symmetry", true, {}};
  const quad::QuadSpec spec{rel_tol, 60, 15};
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    for (int k : {2, 3, 4}) {
      const collar::CollarParams p{eps, k, 6};
      for (int a = 1; a <= 6; ++a) {
        const XReal ip = collar::norm(p, a, spec);
        const XReal im = collar::norm(p, -a, spec);
        const double diff = std::fabs(ip.logmag() - im.logmag());
        CheckRow row{fmt("eps=%g,k=%d,a=%d", eps, k, a), diff <= 1e-9, {}, ""};
        row.values = {{"log_I_pos", ip}, {"log_I_neg", im}, {"logmag_diff", xd(diff)}};
        add_row(rep, std::move(row));
      }
    }
  }
  return rep;
}

// --- criterion 5: norm-ratio law along the epsilon sweep -------------------

CriterionReport c5_ratio_law(double rel_tol) {
  CriterionReport rep{5, "ratio-law", true, {}};
  const quad::QuadSpec spec{rel_tol, 60, 15};
  const int k = 3;
  const double sweep[] = {1e-2, 1e-3, 1e-4};
  double dev[3][3];  // [eps][a-1]
  for (int e = 0; e < 3; ++e) {
    const collar::CollarParams p{sweep[e], k, 4};
    XReal norms[5];
    for (int a = 1; a <= 4; ++a) norms[a] = collar::norm(p, a, spec);
    for (int a = 1; a <= 3; ++a) {
      const double target =
          std::numbers::pi / sweep[e] + (2 * k + 1) * std::log(a / (a + 1.0));
      dev[e][a - 1] = (norms[a + 1].logmag() - norms[a].logmag()) - target;
    }
  }
  for (int a = 1; a <= 3; ++a) {
    const bool monotone = std::fabs(dev[0][a - 1]) > std::fabs(dev[1][a - 1]) &&
                          std::fabs(dev[1][a - 1]) > std::fabs(dev[2][a - 1]);
    const bool small = std::fabs(dev[2][a - 1]) <= 0.05;
    CheckRow row{fmt("k=3,a=%d", a), monotone && small, {}, ""};
    row.values = {{"dev_1e-2", xd(dev[0][a - 1])},
                  {"dev_1e-3", xd(dev[1][a - 1])},
                  {"dev_1e-4", xd(dev[2][a - 1])}};
    add_row(rep, std::move(row));
  }
  return rep;
}

// --- criterion 6: mass concentration windows -------------------------------

CriterionReport c6_mass_concentration(double rel_tol) {
  CriterionReport rep{6, "mass-concentration", true, {}};
  const quad::QuadSpec spec{rel_tol, 60, 15};
  for (int k : {4, 6}) {
    const double threshold = std::pow(k, -std::log(k) + 1.5);
    for (int a : {1, 2}) {
      const double halfwidth = std::sqrt(static_cast<double>(k)) * std::log(k) / a;
      {
        auto g = [k, a](double tau) { return punctured::log_norm_integrand(k, a, tau); };
        const double frac =
            laplace::window_mass_fraction(g, static_cast<double>(k) / a, halfwidth, spec);
        CheckRow row{fmt("punctured,k=%d,a=%d", k, a), 1.0 - frac <= threshold, {}, ""};
        row.values = {{"outside", xd(1.0 - frac)}, {"threshold", xd(threshold)}};
        add_row(rep, std::move(row));
      }
      {
        const collar::CollarParams p{1e-3, k, 0};
        const double outside = collar::norm_mass_outside(p, a, halfwidth, spec);
        CheckRow row{fmt("collar,eps=1e-3,k=%d,a=%d", k, a), outside <= threshold, {}, ""};
        row.values = {{"outside", xd(outside)}, {"threshold", xd(threshold)}};
        add_row(rep, std::move(row));
      }
    }
  }
  return rep;
}

// --- criterion 7: cut-tail bound -------------------------------------------

CriterionReport c7_cut_tail(double rel_tol) {
  CriterionReport rep{7, "cut-tail", true, {}};
  const quad::QuadSpec spec{rel_tol, 60, 15};
  for (double eps : {1e-3, 1e-4}) {
    for (int k : {3, 4}) {
      const collar::CollarParams p{eps, k, 0};
      const collar::CutTailReport r = collar::cut_tail_check(p, spec);
      CheckRow row{fmt("eps=%g,k=%d", eps, k), r.pass, {}, ""};
      row.values = {{"u_lo", xd(r.u_lo)},
                    {"u_hi", xd(r.u_hi)},
                    {"log_density_sup", r.density_sup},
                    {"log_bound", r.bound}};
      add_row(rep, std::move(row));
    }
  }
  return rep;
}

// --- criterion 8: metric ODE, coordinate round-trips, end expansion --------

CriterionReport c8_metric_ode(double) {
  CriterionReport rep{8, "metric-ode", true, {}};
  {  // (log f)'' = 2 f by nonuniform central differences, step 1e-4 in u.
    // log f is sampled through the u-route (identical values; the t-route
    // would add subtraction noise from pi/(2 eps) - t that the second
    // difference amplifies).
    double worst = 0.0;
    const double eps = 1e-2, h = 1e-4;
    for (double u = -6.0; u <= 6.0 + 1e-9; u += 0.05) {
      const double tm = collar::t_of_u(eps, u - h);
      const double t0 = collar::t_of_u(eps, u);
      const double tp = collar::t_of_u(eps, u + h);
      const double fm = collar::log_f_of_u(eps, u - h);
      const double f0 = collar::log_f_of_u(eps, u);
      const double fp = collar::log_f_of_u(eps, u + h);
      const double dm = t0 - tm, dp = tp - t0;
      const double second =
          2.0 * (fm * dp - f0 * (dm + dp) + fp * dm) / (dm * dp * (dm + dp));
      worst = std::max(worst, std::fabs(second - 2.0 * std::exp(f0)));
    }
    add_row(rep, {"ode-residual,eps=1e-2", worst <= 1e-6, {{"max_residual", xd(worst)}}, ""});
  }
  {  // u -> tau -> u across the full advertised range
    double worst = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4})
      for (double u = -50.0; u <= 50.0 + 1e-9; u += 0.5)
        worst = std::max(
            worst, std::fabs(collar::u_from_tau(eps, collar::tau_from_u(eps, u)) - u));
    add_row(rep, {"roundtrip-u-tau-u,|u|<=50", worst <= 1e-10, {{"max_err", xd(worst)}}, ""});
  }
  {  // u -> t -> u over the range where t resolves tau in double precision
    double worst = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4})
      for (double u = -12.0; u <= 12.0 + 1e-9; u += 0.25)
        worst = std::max(worst,
                         std::fabs(collar::u_of_t(eps, collar::t_of_u(eps, u)) - u));
    add_row(rep, {"roundtrip-u-t-u,|u|<=12", worst <= 1e-10, {{"max_err", xd(worst)}}, ""});
  }
  {  // t -> u -> t across the collar
    double worst = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double hp = collar::half_period(eps);
      for (double frac : {-0.999, -0.9, -0.5, -0.1, 0.1, 0.5, 0.9, 0.999}) {
        const double t = frac * hp;
        const double back = collar::t_of_u(eps, collar::u_of_t(eps, t));
        worst = std::max(worst, std::fabs(back - t) / std::max(1.0, std::fabs(t)));
      }
    }
    add_row(rep, {"roundtrip-t-u-t", worst <= 1e-10, {{"max_rel_err", xd(worst)}}, ""});
  }
  {  // tau_eps(u) = 1/(eps (cosh u + 1)) + O(eps / (eps (cosh u + 1))^2)
    double worst = 0.0;
    for (double eps : {1e-2, 1e-3}) {
      for (double c : {10.0, 30.0, 100.0, 1e3, 1e4, 1e6, 1e8}) {
        const double u = std::acosh(c);
        const double lhs = std::fabs(collar::tau_from_u(eps, u) - 1.0 / (eps * (c + 1.0)));
        const double scale = eps / ((eps * (c + 1.0)) * (eps * (c + 1.0)));
        worst = std::max(worst, lhs / scale);
      }
    }
    add_row(rep, {"end-expansion-constant", worst <= 2.0, {{"max_C", xd(worst)}}, ""});
  }
  return rep;
}

// --- criterion 9: Fubini-Study length oracle -------------------------------

CriterionReport c9_fs_length(double rel_tol) {
  CriterionReport rep{9, "fs-length-oracle", true, {}};
  std::mt19937 rng(20240817u);
  std::uniform_int_distribution<int> n_dist(2, 5);
  std::uniform_real_distribution<double> log_dist(-8.0, 8.0);
  std::uniform_real_distribution<double> t_dist(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = n_dist(rng);
    std::vector<int> idx{-3, -2, -1, 0, 1, 2, 3};
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    embedding::SectionFamily fam;
    fam.params = {1e-2, 1, static_cast<int>(idx.size())};
    std::vector<std::pair<int, double>> raw;
    for (int a : idx) {
      const double lg = log_dist(rng);
      fam.entries.emplace_back(a, XReal::from_log(lg));
      raw.emplace_back(a, lg);
    }
    const double t = t_dist(rng);
    const double len_var = embedding::circle_image_length(fam, t).to_double();
    const double len_direct = fs_pullback_circle_length(raw, t);
    const double rel = std::fabs(len_var / len_direct - 1.0);
    CheckRow row{fmt("random-family-%d", trial), rel <= 1e-6, {}, ""};
    row.values = {{"len_variance_route", xd(len_var)},
                  {"len_direct_route", xd(len_direct)},
                  {"rel_dev", xd(rel)}};
    add_row(rep, std::move(row));
  }
  {  // central geodesic against 2 pi sqrt(2 I_0 / I_1)
    const collar::CollarParams p{1e-3, 3, 0};
    const auto fam = embedding::build_family(p, {rel_tol, 60, 15});
    const XReal len = embedding::circle_image_length(fam, 0.0);
    const double target_log = std::log(2.0 * std::numbers::pi) +
                              0.5 * (std::numbers::ln2 + fam.at(0).logmag() - fam.at(1).logmag());
    const double rel = std::fabs(std::expm1(len.logmag() - target_log));
    CheckRow row{"geodesic,eps=1e-3,k=3", rel <= 0.01, {}, ""};
    row.values = {{"log_length", len}, {"log_target", xd(target_log)}, {"rel_dev", xd(rel)}};
    add_row(rep, std::move(row));
  }
  return rep;
}

// --- criterion 10: degeneration profile ------------------------------------

CriterionReport c10_degeneration(double rel_tol) {
  CriterionReport rep{10, "degeneration-profile", true, {}};
  const int k = 3;
  const double sweep[] = {1e-2, 1e-3, 1e-4};
  double len0[3], lent0[3], maxdist[3];
  for (int e = 0; e < 3; ++e) {
    const collar::CollarParams p{sweep[e], k, 0};
    const auto fam = embedding::build_family(p, {rel_tol, 60, 15});
    len0[e] = embedding::circle_image_length(fam, 0.0).logmag();
    lent0[e] = embedding::circle_image_length(fam, embedding::bubble_t0(p)).logmag();
    maxdist[e] = 0.0;
    for (const auto& row : embedding::bubble_profile(fam, 33))
      maxdist[e] = std::max(maxdist[e], row.line_distance);
    CheckRow row{fmt("profile,eps=%g,k=3", sweep[e]),
                 maxdist[e] <= 10.0 * k * k * sweep[e], {}, ""};
    row.values = {{"log_len_t0", xd(len0[e])},
                  {"log_len_tend", xd(lent0[e])},
                  {"max_line_distance", xd(maxdist[e])},
                  {"distance_bound", xd(10.0 * k * k * sweep[e])}};
    add_row(rep, std::move(row));
  }
  add_row(rep, {"lengths-decrease", len0[0] > len0[1] && len0[1] > len0[2] &&
                                        lent0[0] > lent0[1] && lent0[1] > lent0[2],
                {{"log_len0_1e-2", xd(len0[0])},
                 {"log_len0_1e-4", xd(len0[2])},
                 {"log_lent0_1e-2", xd(lent0[0])},
                 {"log_lent0_1e-4", xd(lent0[2])}},
                ""});
  {
    const double eps = 1e-4;
    const double paper_log = std::log(2.0 * std::numbers::pi) - collar::half_period(eps) -
                             (k + 0.5) * std::log(eps * k);
    const double constant = len0[2] - paper_log;
    const double target = k + 0.5 * std::numbers::ln2;
    CheckRow row{"geodesic-length-constant,eps=1e-4",
                 std::fabs(constant - target) <= 0.1, {}, ""};
    row.values = {{"constant", xd(constant)}, {"target", xd(target)}};
    add_row(rep, std::move(row));
  }
  return rep;
}

}  // namespace

double fs_pullback_circle_length(const std::vector<std::pair<int, double>>& entries,
                                 double t, int n_theta) {
  if (entries.size() < 2 || n_theta < 8)
    throw Error(errc::bad_argument, "fs_pullback_circle_length: bad input");
  // Chart around the dominant coordinate; the others become affine coords
  // w_i(theta) = r_i e^{i (a_i - a_m) theta}.
  std::size_t m = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto val = [&](std::size_t j) {
      return entries[j].first * t - 0.5 * entries[j].second;
    };
    if (val(i) > val(m)) m = i;
  }
  const int am = entries[m].first;
  const double lm = entries[m].first * t - 0.5 * entries[m].second;
  struct Coord {
    double r;
    int da;
  };
  std::vector<Coord> w;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == m) continue;
    w.push_back({std::exp(entries[i].first * t - 0.5 * entries[i].second - lm),
                 entries[i].first - am});
  }
  // FS line element in the chart:
  // speed^2 = [(1+|w|^2) sum |w_i'|^2 - |sum conj(w_i) w_i'|^2] / (1+|w|^2)^2
  auto speed = [&](double theta) {
    using C = std::complex<double>;
    double norm2 = 1.0, dnorm2 = 0.0;
    C inner(0.0, 0.0);
    for (const Coord& c : w) {
      const C wi = c.r * std::exp(C(0.0, c.da * theta));
      const C dwi = C(0.0, c.da) * wi;
      norm2 += std::norm(wi);
      dnorm2 += std::norm(dwi);
      inner += std::conj(wi) * dwi;
    }
    const double num = norm2 * dnorm2 - std::norm(inner);
    return std::sqrt(std::max(0.0, num)) / norm2;
  };
  // composite Simpson over [0, 2 pi]
  const int n = n_theta + (n_theta % 2);
  const double h = 2.0 * std::numbers::pi / n;
  double sum = speed(0.0) + speed(2.0 * std::numbers::pi);
  for (int i = 1; i < n; ++i) sum += speed(i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

int criteria_count() { return 10; }

std::string criterion_name(int index) {
  switch (index) {
    case 1: return "exact-norm-oracle";
    case 2: return "laplace-audit";
    case 3: return "concavity-lemma";
    case 4: return "collar-symmetry";
    case 5: return "ratio-law";
    case 6: return "mass-concentration";
    case 7: return "cut-tail";
    case 8: return "metric-ode";
    case 9: return "fs-length-oracle";
    case 10: return "degeneration-profile";
    default: throw Error(errc::bad_argument, "criterion index out of range");
  }
}

CriterionReport run_criterion(int index, double rel_tol) {
  try {
    switch (index) {
      case 1: return c1_exact_norm_oracle(rel_tol);
      case 2: return c2_laplace_audit(rel_tol);
      case 3: return c3_concavity_lemma(rel_tol);
      case 4: return c4_collar_symmetry(rel_tol);
      case 5: return c5_ratio_law(rel_tol);
      case 6: return c6_mass_concentration(rel_tol);
      case 7: return c7_cut_tail(rel_tol);
      case 8: return c8_metric_ode(rel_tol);
      case 9: return c9_fs_length(rel_tol);
      case 10: return c10_degeneration(rel_tol);
      default: throw Error(errc::bad_argument, "criterion index out of range");
    }
  } catch (const std::exception& e) {
    CriterionReport rep{index, criterion_name(index), false, {}};
    rep.rows.push_back({"exception", false, {}, e.what()});
    return rep;
  }
}

std::vector<CriterionReport> run_all(double rel_tol) {
  std::vector<CriterionReport> out;
  out.reserve(criteria_count());
  for (int i = 1; i <= criteria_count(); ++i) out.push_back(run_criterion(i, rel_tol));
  return out;
}

}  // namespace bergman::audit
