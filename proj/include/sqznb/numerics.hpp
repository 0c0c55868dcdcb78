#pragma once

// Bracketed one-dimensional solvers.

#include <cmath>
#include <cstddef>
#include <utility>

namespace sqznb {

struct RootResult {
  double x;
  double residual;  // |f(x) - target|
  std::size_t iterations;
};

// Bisection for f(x) = target on [lo, hi]. f must be monotone (either
// direction) and f(lo) - target, f(hi) - target must not share a sign.
// Stops once |f(x) - target| <= f_tol or the bracket collapses.
template <typename F>
RootResult bisect(F&& f, double target, double lo, double hi, double f_tol,
                  std::size_t max_iterations = 200) {
  double g_lo = f(lo) - target;
  const double g_hi = f(hi) - target;
  if (std::abs(g_lo) <= f_tol) return {lo, std::abs(g_lo), 0};
  if (std::abs(g_hi) <= f_tol) return {hi, std::abs(g_hi), 0};

  double mid = 0.5 * (lo + hi);
  double g_mid = f(mid) - target;
  std::size_t it = 1;
  for (; it < max_iterations && std::abs(g_mid) > f_tol; ++it) {
    if ((g_mid < 0) == (g_lo < 0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;
    mid = next;
    g_mid = f(mid) - target;
  }
  return {mid, std::abs(g_mid), it};
}

struct MaximumResult {
  double x;
  double value;
  std::size_t iterations;
};

// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <typename F>
MaximumResult golden_section_maximize(F&& f, double lo, double hi, double x_tol,
                                      std::size_t max_iterations = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  std::size_t it = 0;
  for (; it < max_iterations && (hi - lo) > x_tol; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  // The bracket endpoints can beat the interior probes when the maximum
  // sits on the boundary.
  MaximumResult best{0.5 * (lo + hi), 0.0, it};
  best.value = f(best.x);
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v > best.value) best = {x, v, it};
  }
  return best;
}

}  // namespace sqznb
