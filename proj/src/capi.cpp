#include "bergman.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "bergman/audit.hpp"
#include "bergman/collar.hpp"
#include "bergman/embedding.hpp"
#include "bergman/error.hpp"
#include "bergman/laplace.hpp"
#include "bergman/punctured.hpp"
#include "bergman/xreal.hpp"

using bergman::XReal;

extern "C" {
struct bgm_collar {
  bergman::collar::SectionNorms norms;
  double rel_tol;
};
struct bgm_audit {
  bergman::audit::CriterionReport report;
};
}

namespace {

thread_local std::string g_last_error;

bgm_status status_of(bergman::errc c) {
  using bergman::errc;
  switch (c) {
    case errc::none: return BGM_OK;
    case errc::bad_argument: return BGM_ERR_ARGUMENT;
    case errc::out_of_domain: return BGM_ERR_DOMAIN;
    case errc::division_by_zero: return BGM_ERR_DIVIDE_BY_ZERO;
    case errc::no_convergence: return BGM_ERR_NO_CONVERGENCE;
    case errc::not_bracketed: return BGM_ERR_NOT_BRACKETED;
    case errc::not_concave: return BGM_ERR_NOT_CONCAVE;
    case errc::no_decaying_tail: return BGM_ERR_NO_DECAYING_TAIL;
    case errc::tail_not_certified: return BGM_ERR_TAIL_NOT_CERTIFIED;
    case errc::empty_region: return BGM_ERR_EMPTY_REGION;
  }
  return BGM_ERR_INTERNAL;
}

template <typename F>
bgm_status guarded(F&& body) {
  try {
    body();
    return BGM_OK;
  } catch (const bergman::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BGM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BGM_ERR_INTERNAL;
  }
}

bgm_xreal wrap(const XReal& x) { return bgm_xreal{x.sign(), x.is_zero() ? 0.0 : x.logmag()}; }

XReal unwrap(bgm_xreal x) {
  if (x.sign == 0) return XReal::zero();
  return XReal::from_log(x.logmag, x.sign);
}

bgm_laplace_result wrap(const bergman::laplace::LaplaceResult& r) {
  bgm_laplace_result out;
  out.t_star = r.t_star;
  out.g_star = r.g_star;
  out.g2_star = r.g2_star;
  out.window_halfwidth = r.window_halfwidth;
  out.estimate = wrap(r.estimate);
  out.left_tail = wrap(r.left_tail);
  out.right_tail = wrap(r.right_tail);
  return out;
}

bergman::quad::QuadSpec spec_of(double rel_tol) {
  bergman::quad::QuadSpec s;
  if (rel_tol > 0) s.rel_tol = rel_tol;
  return s;
}

}  // namespace

extern "C" {

const char* bgm_status_name(bgm_status s) {
  switch (s) {
    case BGM_OK: return "ok";
    case BGM_ERR_ARGUMENT: return "bad argument";
    case BGM_ERR_DOMAIN: return "out of domain";
    case BGM_ERR_DIVIDE_BY_ZERO: return "division by zero";
    case BGM_ERR_NO_CONVERGENCE: return "no convergence";
    case BGM_ERR_NOT_BRACKETED: return "maximizer not bracketed";
    case BGM_ERR_NOT_CONCAVE: return "not locally concave";
    case BGM_ERR_NO_DECAYING_TAIL: return "no decaying tail detected";
    case BGM_ERR_TAIL_NOT_CERTIFIED: return "tail not certified";
    case BGM_ERR_EMPTY_REGION: return "empty region";
    case BGM_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* bgm_last_error(void) { return g_last_error.c_str(); }

bgm_xreal bgm_xr_from_double(double x) {
  bgm_xreal out{0, 0.0};
  guarded([&] { out = wrap(XReal::from_double(x)); });
  return out;
}

double bgm_xr_to_double(bgm_xreal x) {
  double out = 0.0;
  guarded([&] { out = unwrap(x).to_double(); });
  return out;
}

bgm_xreal bgm_xr_add(bgm_xreal x, bgm_xreal y) {
  bgm_xreal out{0, 0.0};
  guarded([&] { out = wrap(unwrap(x) + unwrap(y)); });
  return out;
}

bgm_xreal bgm_xr_sub(bgm_xreal x, bgm_xreal y) {
  bgm_xreal out{0, 0.0};
  guarded([&] { out = wrap(unwrap(x) - unwrap(y)); });
  return out;
}

bgm_xreal bgm_xr_mul(bgm_xreal x, bgm_xreal y) {
  bgm_xreal out{0, 0.0};
  guarded([&] { out = wrap(unwrap(x) * unwrap(y)); });
  return out;
}

bgm_status bgm_xr_div(bgm_xreal x, bgm_xreal y, bgm_xreal* out) {
  return guarded([&] { *out = wrap(unwrap(x) / unwrap(y)); });
}

bgm_status bgm_xr_pow_int(bgm_xreal x, long n, bgm_xreal* out) {
  return guarded([&] { *out = wrap(unwrap(x).pow_int(n)); });
}

int bgm_xr_format(bgm_xreal x, char* buf, size_t cap) {
  std::string s;
  if (guarded([&] {
        const XReal v = unwrap(x);
        s = v.has_decimal() ? v.decimal() : v.str();
      }) != BGM_OK)
    return -1;
  if (s.size() + 1 > cap) return -1;
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return static_cast<int>(s.size());
}

bgm_status bgm_log_factorial(long n, double* out) {
  return guarded([&] { *out = bergman::log_factorial(n); });
}

/* ---- punctured ---------------------------------------------------------- */

bgm_status bgm_punctured_norm_exact(int k, int a, bgm_xreal* out) {
  return guarded([&] { *out = wrap(bergman::punctured::norm_exact(k, a)); });
}

bgm_status bgm_punctured_norm_quad(int k, int a, double rel_tol, bgm_xreal* out) {
  return guarded([&] { *out = wrap(bergman::punctured::norm_quad(k, a, spec_of(rel_tol))); });
}

bgm_status bgm_punctured_norm_laplace(int k, int a, bgm_laplace_result* out) {
  return guarded([&] { *out = wrap(bergman::punctured::norm_laplace(k, a)); });
}

bgm_status bgm_punctured_default_cutoff(int k, double tau, int* out) {
  return guarded([&] { *out = bergman::punctured::default_cutoff(k, tau); });
}

bgm_status bgm_punctured_density(int k, double tau, int cutoff_a, bgm_xreal* out) {
  return guarded([&] { *out = wrap(bergman::punctured::density(k, tau, cutoff_a)); });
}

bgm_status bgm_punctured_term_weights(int k, double tau, int cutoff_a, int* a_out,
                                      double* w_out, int cap, int* n_out) {
  return guarded([&] {
    const auto w = bergman::punctured::term_weights(k, tau, cutoff_a);
    *n_out = static_cast<int>(w.size());
    for (int i = 0; i < cap && i < *n_out; ++i) {
      a_out[i] = w[i].first;
      w_out[i] = w[i].second;
    }
  });
}

bgm_status bgm_punctured_mass_outside(int k, int a, double halfwidth, double rel_tol,
                                      double* out) {
  return guarded([&] {
    auto g = [k, a](double tau) { return bergman::punctured::log_norm_integrand(k, a, tau); };
    const double center = static_cast<double>(k) / a;
    *out = 1.0 - bergman::laplace::window_mass_fraction(g, center, halfwidth, spec_of(rel_tol));
  });
}

/* ---- collar ------------------------------------------------------------- */

bgm_status bgm_collar_t_of_u(double epsilon, double u, double* out) {
  return guarded([&] { *out = bergman::collar::t_of_u(epsilon, u); });
}

bgm_status bgm_collar_u_of_t(double epsilon, double t, double* out) {
  return guarded([&] { *out = bergman::collar::u_of_t(epsilon, t); });
}

bgm_status bgm_collar_tau_of_u(double epsilon, double u, double* out) {
  return guarded([&] { *out = bergman::collar::tau_from_u(epsilon, u); });
}

bgm_status bgm_collar_u_of_tau(double epsilon, double tau, double* out) {
  return guarded([&] { *out = bergman::collar::u_from_tau(epsilon, tau); });
}

bgm_status bgm_collar_log_f(double epsilon, double t, double* out) {
  return guarded([&] { *out = bergman::collar::log_f_of_t(epsilon, t); });
}

bgm_status bgm_collar_cusp_comparison(double epsilon, double u, double* tau_out,
                                      double* distortion_out) {
  return guarded([&] {
    const auto c = bergman::collar::cusp_comparison(epsilon, u);
    *tau_out = c.tau;
    *distortion_out = c.distortion;
  });
}

bgm_status bgm_collar_create(double epsilon, int k, int cutoff_a, double rel_tol,
                             bgm_collar** out) {
  return guarded([&] {
    bergman::collar::CollarParams p{epsilon, k, cutoff_a > 0 ? cutoff_a : 0};
    p.validate();
    auto* handle = new bgm_collar{bergman::collar::build_norms(p, spec_of(rel_tol)),
                                  spec_of(rel_tol).rel_tol};
    *out = handle;
  });
}

void bgm_collar_destroy(bgm_collar* c) { delete c; }

double bgm_collar_epsilon(const bgm_collar* c) { return c->norms.params.epsilon; }
int bgm_collar_k(const bgm_collar* c) { return c->norms.params.k; }
int bgm_collar_cutoff(const bgm_collar* c) { return c->norms.params.cutoff(); }
double bgm_collar_half_period(const bgm_collar* c) {
  return bergman::collar::half_period(c->norms.params.epsilon);
}

bgm_status bgm_collar_norm(const bgm_collar* c, int a, bgm_xreal* out) {
  return guarded([&] { *out = wrap(c->norms.at(a)); });
}

bgm_status bgm_collar_norm_laplace(const bgm_collar* c, int a, bgm_laplace_result* out) {
  return guarded([&] { *out = wrap(bergman::collar::norm_laplace(c->norms.params, a)); });
}

bgm_status bgm_collar_maximizer_t(const bgm_collar* c, int a, double* out) {
  return guarded([&] { *out = bergman::collar::maximizer_t(c->norms.params, a); });
}

bgm_status bgm_collar_density(const bgm_collar* c, double t, bgm_xreal* out) {
  return guarded([&] { *out = wrap(bergman::collar::density(c->norms, t)); });
}

bgm_status bgm_collar_mass_outside(const bgm_collar* c, int a, double halfwidth,
                                   double rel_tol, double* out) {
  return guarded([&] {
    *out = bergman::collar::norm_mass_outside(c->norms.params, a, halfwidth, spec_of(rel_tol));
  });
}

bgm_status bgm_collar_cut_tail(const bgm_collar* c, bgm_cut_tail_report* out) {
  return guarded([&] {
    const auto r = bergman::collar::cut_tail_check(c->norms);
    out->u_lo = r.u_lo;
    out->u_hi = r.u_hi;
    out->density_sup = wrap(r.density_sup);
    out->bound = wrap(r.bound);
    out->pass = r.pass ? 1 : 0;
  });
}

/* ---- embedding ----------------------------------------------------------- */

bgm_status bgm_collar_weights_at(const bgm_collar* c, double t, int* a_out,
                                 bgm_xreal* w_out, int cap, int* n_out) {
  return guarded([&] {
    const auto w = bergman::embedding::weights_at(c->norms, t);
    *n_out = static_cast<int>(w.size());
    for (int i = 0; i < cap && i < *n_out; ++i) {
      a_out[i] = w[i].first;
      w_out[i] = wrap(w[i].second);
    }
  });
}

bgm_status bgm_collar_circle_length(const bgm_collar* c, double t, bgm_xreal* out) {
  return guarded([&] { *out = wrap(bergman::embedding::circle_image_length(c->norms, t)); });
}

bgm_status bgm_collar_reduced_map(const bgm_collar* c, bgm_xreal* c_numeric,
                                  bgm_xreal* c_paper) {
  return guarded([&] {
    const auto r = bergman::embedding::reduced_map(c->norms);
    *c_numeric = wrap(r.c_numeric);
    *c_paper = wrap(r.c_paper);
  });
}

double bgm_collar_bubble_t0(const bgm_collar* c) {
  return bergman::embedding::bubble_t0(c->norms.params);
}

bgm_status bgm_collar_bubble_profile(const bgm_collar* c, int n_samples,
                                     bgm_profile_row* rows) {
  return guarded([&] {
    const auto profile = bergman::embedding::bubble_profile(c->norms, n_samples);
    for (int i = 0; i < n_samples; ++i) {
      const auto& r = profile[static_cast<std::size_t>(i)];
      rows[i].t = r.t;
      for (int j = 0; j < 3; ++j) {
        rows[i].top_a[j] = r.top_weights[j].first;
        rows[i].top_w[j] = r.top_weights[j].second;
      }
      rows[i].circle_length = wrap(r.circle_length);
      rows[i].reduced_coordinate = wrap(r.reduced_coordinate);
      rows[i].line_distance = r.line_distance;
    }
  });
}

/* ---- audit ---------------------------------------------------------------- */

int bgm_audit_criteria_count(void) { return bergman::audit::criteria_count(); }

const char* bgm_audit_criterion_name(int index) {
  static thread_local std::string name;
  if (guarded([&] { name = bergman::audit::criterion_name(index); }) != BGM_OK) return nullptr;
  return name.c_str();
}

bgm_status bgm_audit_run(int index, double rel_tol, bgm_audit** out) {
  return guarded([&] {
    auto* a = new bgm_audit{bergman::audit::run_criterion(index, rel_tol > 0 ? rel_tol : 1e-12)};
    *out = a;
  });
}

void bgm_audit_destroy(bgm_audit* a) { delete a; }

int bgm_audit_pass(const bgm_audit* a) { return a->report.pass ? 1 : 0; }

int bgm_audit_row_count(const bgm_audit* a) { return static_cast<int>(a->report.rows.size()); }

static const bergman::audit::CheckRow* row_at(const bgm_audit* a, int row) {
  if (row < 0 || row >= static_cast<int>(a->report.rows.size())) return nullptr;
  return &a->report.rows[static_cast<std::size_t>(row)];
}

const char* bgm_audit_row_id(const bgm_audit* a, int row) {
  const auto* r = row_at(a, row);
  return r ? r->id.c_str() : nullptr;
}

int bgm_audit_row_pass(const bgm_audit* a, int row) {
  const auto* r = row_at(a, row);
  return r && r->pass ? 1 : 0;
}

const char* bgm_audit_row_note(const bgm_audit* a, int row) {
  const auto* r = row_at(a, row);
  return r ? r->note.c_str() : nullptr;
}

int bgm_audit_row_value_count(const bgm_audit* a, int row) {
  const auto* r = row_at(a, row);
  return r ? static_cast<int>(r->values.size()) : 0;
}

const char* bgm_audit_row_value_key(const bgm_audit* a, int row, int value) {
  const auto* r = row_at(a, row);
  if (!r || value < 0 || value >= static_cast<int>(r->values.size())) return nullptr;
  return r->values[static_cast<std::size_t>(value)].first.c_str();
}

bgm_xreal bgm_audit_row_value(const bgm_audit* a, int row, int value) {
  const auto* r = row_at(a, row);
  if (!r || value < 0 || value >= static_cast<int>(r->values.size())) return bgm_xreal{0, 0.0};
  return wrap(r->values[static_cast<std::size_t>(value)].second);
}

} /* extern "C" */
