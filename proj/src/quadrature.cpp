#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace bergman::quad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Clenshaw-Curtis panel rule: 15 points with the 8-point rule nested on the
// even-indexed nodes.  Nodes are cos(j*pi/14); weights integrate the
// Chebyshev interpolant exactly (endpoint weights are 1/195 and 1/49).
constexpr int kN = 15;
constexpr double kNode[kN] = {
    1.0,
    0.9749279121818236070,
    0.9009688679024191262,
    0.7818314824680298087,
    0.6234898018587335305,
    0.4338837391175581205,
    0.2225209339563144043,
    0.0,
    -0.2225209339563144043,
    -0.4338837391175581205,
    -0.6234898018587335305,
    -0.7818314824680298087,
    -0.9009688679024191262,
    -0.9749279121818236070,
    -1.0,
};
constexpr double kW15[kN] = {
    0.005128205128205128205,
    0.048699387295088238551,
    0.097820391676052159129,
    0.139665078495604318032,
    0.175605789001066746765,
    0.202051467482383573637,
    0.218881511630573401798,
    0.224296338582052867767,
    0.218881511630573401798,
    0.202051467482383573637,
    0.175605789001066746765,
    0.139665078495604318032,
    0.097820391676052159129,
    0.048699387295088238551,
    0.005128205128205128205,
};
constexpr double kW8[8] = {
    0.020408163265306122449,  //
    0.190141007218208351784,  //
    0.352242423718159115332,  //
    0.437208405798326410435,  //
    0.437208405798326410435,  //
    0.352242423718159115332,  //
    0.190141007218208351784,  //
    0.020408163265306122449,
};

struct Panel {
  double lo, hi;
  XReal value;  // >= 0
  XReal err;    // >= 0
  int depth;
};

double checked_log_value(const LogFn& logf, double t) {
  const double v = logf(t);
  if (std::isnan(v) || v == kInf)
    throw Error(errc::bad_argument, "integrate_log: integrand log value is NaN or +inf");
  return v;
}

Panel eval_panel(const LogFn& logf, double lo, double hi, int depth) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double lf[kN];
  double m = -kInf;
  for (int j = 0; j < kN; ++j) {
    lf[j] = checked_log_value(logf, c + h * kNode[j]);
    m = std::max(m, lf[j]);
  }
  Panel p{lo, hi, XReal::zero(), XReal::zero(), depth};
  if (m == -kInf) return p;  // integrand vanishes on the whole panel
  double s15 = 0.0, s8 = 0.0;
  for (int j = 0; j < kN; ++j) {
    const double e = std::exp(lf[j] - m);
    s15 += kW15[j] * e;
    if ((j & 1) == 0) s8 += kW8[j / 2] * e;
  }
  p.value = XReal::from_log(m + std::log(s15 * h));
  const double diff = std::fabs(s15 - s8);
  if (diff > 0.0) p.err = XReal::from_log(m + std::log(diff * h));
  return p;
}

bool within_tolerance(const XReal& total, const XReal& toterr, double rel_tol) {
  if (toterr.is_zero()) return true;
  if (total.is_zero()) return false;
  return toterr.logmag() <= total.logmag() + std::log(rel_tol);
}

}  // namespace

XReal integrate_log(const LogFn& logf, double lo, double hi, const QuadSpec& spec) {
  if (!(lo < hi)) throw Error(errc::bad_argument, "integrate_log: requires lo < hi");
  if (!(spec.rel_tol > 0)) throw Error(errc::bad_argument, "integrate_log: rel_tol must be > 0");
  if (spec.max_depth < 10) throw Error(errc::bad_argument, "integrate_log: max_depth must be >= 10");
  if (spec.panel_order != 15)
    throw Error(errc::bad_argument, "integrate_log: only the 15-point panel rule is provided");

  std::vector<Panel> panels;
  panels.push_back(eval_panel(logf, lo, hi, 0));

  auto resum = [&](XReal& total, XReal& toterr) {
    total = XReal::zero();
    toterr = XReal::zero();
    for (const Panel& p : panels) {
      total = total + p.value;
      toterr = toterr + p.err;
    }
  };

  XReal total, toterr;
  resum(total, toterr);
  constexpr std::size_t kMaxPanels = 4096;
  int since_resum = 0;
  while (true) {
    if (within_tolerance(total, toterr, spec.rel_tol)) {
      // Incremental totals drift a little; confirm with an exact resum.
      resum(total, toterr);
      since_resum = 0;
      if (within_tolerance(total, toterr, spec.rel_tol)) break;
    }
    // Worst panel next; ties resolved by position to keep runs deterministic.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      const XReal &a = panels[i].err, &b = panels[worst].err;
      if (b < a || (a == b && panels[i].lo < panels[worst].lo)) worst = i;
    }
    Panel old = panels[worst];
    if (old.depth >= spec.max_depth || panels.size() >= kMaxPanels) {
      char detail[160];
      std::snprintf(detail, sizeof detail,
                    "integrate_log: did not converge (worst panel [%.17g, %.17g] depth %d, "
                    "err logmag %.6g, %zu panels)",
                    old.lo, old.hi, old.depth, old.err.is_zero() ? 0.0 : old.err.logmag(),
                    panels.size());
      throw QuadratureError(total, toterr, detail);
    }
    const double mid = 0.5 * (old.lo + old.hi);
    Panel left = eval_panel(logf, old.lo, mid, old.depth + 1);
    Panel right = eval_panel(logf, mid, old.hi, old.depth + 1);
    panels[worst] = left;
    panels.push_back(right);
    if (++since_resum >= 32) {
      resum(total, toterr);
      since_resum = 0;
    } else {
      total = total - old.value + left.value + right.value;
      toterr = toterr - old.err + left.err + right.err;
    }
  }
  return total;
}

XReal integrate_log_halfline(const LogFn& logf, const LogFn& dlogf, double x0,
                             const QuadSpec& spec, double* trunc_point) {
  XReal accum = XReal::zero();
  double t = x0;
  double step = std::max(1.0, 1e-3 * std::fabs(x0));
  const double log_tol = std::log(spec.rel_tol);
  const double log_start = checked_log_value(logf, x0);
  for (int iter = 0; iter < 48; ++iter) {
    const double tn = t + step;
    const double d = dlogf(tn);
    const double lf = checked_log_value(logf, tn);
    // still rising after growing by e^{1e5}: give up before the segment
    // integrals become unmanageable
    if (d >= 0.0 && lf - std::max(log_start, 0.0) > 1e5)
      throw Error(errc::no_decaying_tail, "integrate_log_halfline: no decaying tail detected");
    accum = accum + integrate_log(logf, t, tn, spec);
    if (d < 0.0) {
      const double bound_log = lf == -kInf ? -kInf : lf - std::log(-d);
      const bool below = bound_log == -kInf ||
                         (!accum.is_zero() && bound_log <= accum.logmag() + log_tol);
      if (below) {
        if (trunc_point) *trunc_point = tn;
        return accum;
      }
    }
    t = tn;
    step *= 2.0;
  }
  throw Error(errc::no_decaying_tail, "integrate_log_halfline: no decaying tail detected");
}

}  // namespace bergman::quad
