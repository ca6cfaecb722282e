#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "necrotic/types.hpp"

namespace necrotic {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bracketed root search for a continuous f with f(lo) f(hi) <= 0.
///
/// Each step proposes the secant (regula falsi) point of the current bracket
/// and falls back to bisection whenever that point lands too close to an end
/// or the bracket failed to halve over the last two steps. Stops when
/// |f(x)| <= residual_tol or the bracket has collapsed to a few ulps.
template <typename F>
RootResult find_root(F&& f, double lo, double hi, double residual_tol, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  RootResult out;
  if (flo == 0.0) return {lo, 0.0, 0, true};
  if (fhi == 0.0) return {hi, 0.0, 0, true};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw DomainError("find_root: interval does not bracket a sign change");
  }
  double width_two_ago = std::numeric_limits<double>::infinity();
  double width_prev = hi - lo;
  bool force_bisect = false;
  for (int it = 1; it <= max_iter; ++it) {
    double x = 0.5 * (lo + hi);
    if (!force_bisect) {
      const double xs = hi - fhi * (hi - lo) / (fhi - flo);
      const double guard = 1e-3 * (hi - lo);
      if (std::isfinite(xs) && xs > lo + guard && xs < hi - guard) x = xs;
    }
    const double fx = f(x);
    out = {x, fx, it, false};
    if (std::abs(fx) <= residual_tol) {
      out.converged = true;
      return out;
    }
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (hi - lo <= 4.0 * eps * std::max(std::abs(lo), std::abs(hi))) {
      // Bracket exhausted: report the better end.
      out = std::abs(flo) < std::abs(fhi) ? RootResult{lo, flo, it, true}
                                          : RootResult{hi, fhi, it, true};
      return out;
    }
    force_bisect = (hi - lo) > 0.5 * width_two_ago;
    width_two_ago = width_prev;
    width_prev = hi - lo;
  }
  return out;
}

/// Like find_root but throws NumericalError when the cap is hit.
template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double residual_tol, const char* what) {
  const RootResult r = find_root(std::forward<F>(f), lo, hi, residual_tol);
  if (!r.converged) {
    throw NumericalError(std::string(what) + ": root search did not converge, residual " +
                         std::to_string(r.residual));
  }
  return r.x;
}

}  // namespace necrotic
