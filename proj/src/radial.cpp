#include "necrotic/radial.hpp"

#include <cmath>

#include "necrotic/quadrature.hpp"
#include "necrotic/roots.hpp"

namespace necrotic {

double solve_Rstar(const ModelParams& p, double tol) {
  const double target = 1.0 / p.sigma_hat;
  auto h = [&](double R) { return detail::sinhc_with_derivatives(R).value - target; };
  const double hi = std::acosh(target) + 10.0;
  return solve_bracketed(h, 1e-8, hi, tol * target, "solve_Rstar");
}

double solve_K(double R, const ModelParams& p, double tol) {
  if (!(R > 0.0)) throw DomainError("solve_K: radius must be positive");
  if (!has_necrotic_core(R, p)) return 0.0;
  const double target = R / p.sigma_hat;
  // Strictly decreasing in K on (0, R): derivative is -K sinh(R - K).
  auto phi = [&](double K) { return std::sinh(R - K) + K * std::cosh(R - K) - target; };
  return solve_bracketed(phi, 0.0, R, tol * target, "solve_K");
}

RadialValue<double> eval_U(double r, double R, const ModelParams& p, double tol) {
  if (r < 0.0 || r > R) throw DomainError("eval_U: r must lie in [0, R]");
  return eval_U(r, R, solve_K(R, p, tol), p);
}

double eval_F(double R, const ModelParams& p, double tol) {
  if (!(R > 0.0)) throw DomainError("eval_F: radius must be positive");
  return eval_F_given_K(R, solve_K(R, p, tol), p);
}

RadialValue<double> eval_V(double r, double R, const ModelParams& p, double tol) {
  if (!has_necrotic_core(R, p)) {
    throw DomainError("eval_V: requires R > R* (ball without a necrotic core)");
  }
  if (r < 0.0 || r > R) throw DomainError("eval_V: r must lie in [0, R]");
  return eval_V_given_K(r, R, solve_K(R, p, tol), p);
}

RadialProfile make_profile(double R, const ModelParams& p, int points, double tol) {
  if (points < 2) throw DomainError("make_profile: need at least two points");
  RadialProfile prof;
  prof.params = p;
  prof.R = R;
  prof.K = solve_K(R, p, tol);
  prof.grid = Vec::LinSpaced(points, 0.0, R);
  prof.sigma.resize(points);
  for (int i = 0; i < points; ++i) prof.sigma(i) = eval_U(prof.grid(i), R, prof.K, p).value;
  if (prof.K > 0.0) {
    Vec pi(points);
    for (int i = 0; i < points; ++i) pi(i) = eval_V_given_K(prof.grid(i), R, prof.K, p).value;
    prof.pi = std::move(pi);
  }
  return prof;
}

namespace {

// (1/3) mu sigma~ K^3 + mu int_K^R U eta^2 - (1/3)(mu sigma~ + nu) R^3, with the
// integral done by quadrature rather than the closed form.
double flux_identity(double R, const ModelParams& p, double tol) {
  const double K = solve_K(R, p, tol);
  const double a = p.mu;
  auto integrand = [&](double eta) { return eval_U(eta, R, K, p).value * eta * eta; };
  const QuadResult q = integrate(integrand, K, R, 1e-15 * R * R * R, 1e-15);
  return a * p.sigma_tilde * K * K * K / 3.0 + a * q.value -
         (a * p.sigma_tilde + p.nu) * R * R * R / 3.0;
}

}  // namespace

StationaryState solve_Rs(const ModelParams& p, double tol, int profile_points) {
  StationaryState s;
  s.params = p;
  s.r_star = solve_Rstar(p, tol);

  // F > 0 up to R_s and R_s > R*, so the bracket starts at R*.
  const double lo = s.r_star;
  double hi = 2.0 * s.r_star;
  auto F = [&](double R) { return eval_F(R, p, tol); };
  for (int i = 0; F(hi) >= 0.0; ++i) {
    if (i > 60) throw NumericalError("solve_Rs: no sign change of F found");
    hi *= 2.0;
  }
  // The residual target is tightened so the root itself, not only F, meets tol.
  s.R_s = solve_bracketed(F, lo, hi, 1e-3 * tol, "solve_Rs");
  s.K_s = solve_K(s.R_s, p, tol);

  auto flux = [&](double R) { return flux_identity(R, p, tol) / (R * R * R); };
  s.R_s_flux_root = solve_bracketed(flux, lo * (1.0 + 1e-9), hi, 1e-3 * tol, "solve_Rs (flux)");
  s.flux_identity_residual = flux(s.R_s);

  s.sigma_s_prime_at_Rs = eval_U(s.R_s, s.R_s, s.K_s, p).d1;
  s.g_at_1 = g_at_one(p);
  s.profile = make_profile(s.R_s, p, profile_points, tol);
  return s;
}

}  // namespace necrotic
