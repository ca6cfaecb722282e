#include "necrotic/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "necrotic/ode.hpp"
#include "necrotic/radial.hpp"
#include "necrotic/roots.hpp"

namespace necrotic {

Trajectory integrate(double R0, double horizon, const ModelParams& p, const StepControl& control) {
  if (!(R0 > 0.0)) throw DomainError("integrate: R0 must be positive");
  if (horizon == 0.0 || !std::isfinite(horizon)) throw DomainError("integrate: horizon must be nonzero");
  if (control.samples < 2) throw DomainError("integrate: need at least two samples");

  Trajectory traj;
  traj.r_star = solve_Rstar(p, control.root_tol);
  const double r_star = traj.r_star;
  const std::function<double(double, double)> rhs = [&](double, double R) {
    return R * eval_F(R, p, control.root_tol);
  };

  const double dir = horizon > 0.0 ? 1.0 : -1.0;
  const double t_end = horizon;
  std::vector<DopriStep> steps;

  double t = 0.0;
  double y = R0;
  double k1 = rhs(t, y);
  double h = dir * std::min(std::abs(horizon), 1e-2 / std::max(1e-12, std::abs(k1) / y + 1e-3));
  if (R0 > r_star) traj.onset_time = 0.0;

  while (dir * (t_end - t) > 0.0) {
    if (traj.accepted_steps + traj.rejected_steps > control.max_steps) {
      throw NumericalError("integrate: step budget exhausted");
    }
    if (dir * (t + h - t_end) > 0.0) h = t_end - t;
    const double h_min = 1e-14 * std::max(1.0, std::abs(t));
    if (std::abs(h) < h_min) throw NumericalError("integrate: step size underflow");

    DopriAttempt att = dopri_attempt(rhs, t, y, k1, h, control.rtol, control.atol);
    const double factor =
        att.error_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(att.error_norm, -0.2), 0.2, 5.0);
    if (att.error_norm > 1.0 || !std::isfinite(att.step.y1)) {
      ++traj.rejected_steps;
      h *= std::isfinite(att.step.y1) ? std::min(1.0, factor) : 0.2;
      continue;
    }

    // Event: crossing R = R* inside the step. Cut the step there and restart.
    const double g0 = att.step.y0 - r_star;
    const double g1 = att.step.y1 - r_star;
    if (g0 != 0.0 && std::signbit(g0) != std::signbit(g1)) {
      const DopriStep& s = att.step;
      auto g = [&](double tau) { return s.dense(tau) - r_star; };
      const double ta = std::min(s.t0, s.t0 + s.h);
      const double tb = std::max(s.t0, s.t0 + s.h);
      const double t_event = find_root(g, ta, tb, 1e-15 * r_star).x;
      if (g1 > 0.0 && !traj.onset_time) traj.onset_time = t_event;
      const double h_cut = t_event - t;
      if (std::abs(h_cut) > h_min) {
        att = dopri_attempt(rhs, t, y, k1, h_cut, control.rtol, control.atol);
        steps.push_back(att.step);
        ++traj.accepted_steps;
        t = t_event;
        y = r_star;
      } else {
        t = t_event;
        y = r_star;
      }
      k1 = rhs(t, y);
      continue;
    }

    steps.push_back(att.step);
    ++traj.accepted_steps;
    t = att.step.t0 + att.step.h;
    y = att.step.y1;
    k1 = att.slope_end;
    h *= std::min(factor, 5.0);
  }

  const int n = control.samples;
  traj.times = Vec::LinSpaced(n, 0.0, horizon);
  traj.radii.resize(n);
  traj.core_radii.resize(n);
  std::size_t cursor = 0;
  for (int i = 0; i < n; ++i) {
    const double ti = traj.times(i);
    double Ri = R0;
    if (i == n - 1) {
      Ri = y;
    } else if (!steps.empty()) {
      while (cursor + 1 < steps.size() &&
             dir * (steps[cursor].t0 + steps[cursor].h - ti) < 0.0) {
        ++cursor;
      }
      Ri = steps[cursor].dense(ti);
    }
    traj.radii(i) = Ri;
    traj.core_radii(i) = solve_K(Ri, p, control.root_tol);
  }
  return traj;
}

}  // namespace necrotic
