#ifndef BERGMAN_QUADRATURE_HPP
#define BERGMAN_QUADRATURE_HPP

#include <functional>

#include "bergman/error.hpp"
#include "bergman/xreal.hpp"

namespace bergman::quad {

/// Integrand supplied as t -> log f(t).  -inf means the integrand vanishes
/// there; +inf and NaN are rejected.  Must tolerate concurrent invocation.
using LogFn = std::function<double(double)>;

struct QuadSpec {
  double rel_tol = 1e-12;
  int max_depth = 60;
  int panel_order = 15;  // nested 15-point panel rule (8-point embedded)
};

/// Thrown when the adaptive subdivision hits max_depth before the estimated
/// relative error drops below rel_tol.  Carries the best estimate so far.
class QuadratureError : public Error {
 public:
  QuadratureError(const XReal& best, const XReal& err, const std::string& what)
      : Error(errc::no_convergence, what), best_estimate(best), error_bound(err) {}
  XReal best_estimate;
  XReal error_bound;
};

/// integral of e^{logf(t)} dt over [lo, hi], computed panel-by-panel with the
/// integrand rescaled by each panel's running maximum log before summation,
/// so values like e^{+-30000} never materialise.  Estimated relative error
/// <= spec.rel_tol on return.
XReal integrate_log(const LogFn& logf, double lo, double hi, const QuadSpec& spec = {});

/// integral of e^{logf} over [x0, inf) for integrands whose log is concave
/// beyond the maximizer.  Walks right from x0 with doubling steps until the
/// concavity tail bound e^{logf(T)} / (-dlogf(T)) falls below rel_tol times
/// the accumulated integral, then the remainder is dropped.
///
/// If trunc_point is non-null it receives the accepted truncation point T.
/// Throws errc::no_decaying_tail if dlogf never goes negative within the
/// scan horizon.
XReal integrate_log_halfline(const LogFn& logf, const LogFn& dlogf, double x0,
                             const QuadSpec& spec = {}, double* trunc_point = nullptr);

}  // namespace bergman::quad

#endif
