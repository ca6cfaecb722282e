#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "necrotic/types.hpp"

namespace necrotic {

/// One accepted Dormand-Prince 5(4) step of a scalar autonomous-or-not ODE,
/// with the 4th-order continuous extension over [t0, t0 + h].
struct DopriStep {
  double t0 = 0.0;
  double h = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
  std::array<double, 5> cont{};

  /// Dense output at t in [t0, t0 + h] (or [t0 + h, t0] when h < 0).
  double dense(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return cont[0] + th * (cont[1] + th1 * (cont[2] + th * (cont[3] + th1 * cont[4])));
  }
};

struct DopriAttempt {
  DopriStep step;
  double error_norm = 0.0;  ///< weighted local error; <= 1 means acceptable
  double slope_end = 0.0;   ///< f(t1, y1), reusable as the next first stage
};

/// Attempts a single step from (t, y) with stepsize h. k1 = f(t, y).
DopriAttempt dopri_attempt(const std::function<double(double, double)>& f, double t, double y,
                           double k1, double h, double rtol, double atol);

}  // namespace necrotic
