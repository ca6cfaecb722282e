#pragma once

#include <cmath>
#include <optional>

#include "necrotic/model.hpp"
#include "necrotic/types.hpp"

namespace necrotic {

/// Value and first two radial derivatives of a radial field.
template <typename Scalar>
struct RadialValue {
  Scalar value{};
  Scalar d1{};
  Scalar d2{};
};

namespace detail {

// sinh(r)/r and its first two derivatives, with a Taylor branch near zero.
template <typename Scalar>
RadialValue<Scalar> sinhc_with_derivatives(Scalar r) {
  using std::cosh;
  using std::sinh;
  if (r < Scalar(0.05)) {
    const Scalar r2 = r * r;
    return {Scalar(1) + r2 / 6 + r2 * r2 / 120 + r2 * r2 * r2 / 5040,
            r / 3 + r * r2 / 30 + r * r2 * r2 / 840 + r * r2 * r2 * r2 / 45360,
            Scalar(1) / 3 + r2 / 10 + r2 * r2 / 168 + r2 * r2 * r2 / 6480};
  }
  const Scalar s = sinh(r) / r;
  const Scalar d1 = (r * cosh(r) - sinh(r)) / (r * r);
  return {s, d1, s - 2 * d1 / r};
}

}  // namespace detail

/// True when a ball of radius R carries a necrotic core, i.e. R > R*.
template <typename Scalar>
bool has_necrotic_core(Scalar R, const ModelParamsT<Scalar>& p) {
  return detail::sinhc_with_derivatives(R).value * p.sigma_hat > Scalar(1);
}

/// Radial nutrient profile U(r, R) with analytic derivatives, given the core
/// radius K = K(R) (K = 0 selects the core-free branch). At r = K the
/// derivatives are the one-sided limits from the living side.
template <typename Scalar>
RadialValue<Scalar> eval_U(Scalar r, Scalar R, Scalar K, const ModelParamsT<Scalar>& p) {
  using std::cosh;
  using std::sinh;
  if (K > Scalar(0)) {
    if (r < K) return {p.sigma_hat, Scalar(0), Scalar(0)};
    const Scalar t = r - K;
    const Scalar w = sinh(t) + K * cosh(t);
    const Scalar dw = cosh(t) + K * sinh(t);
    const Scalar sh = p.sigma_hat;
    return {sh * w / r, sh * (dw / r - w / (r * r)),
            sh * (w / r - 2 * dw / (r * r) + 2 * w / (r * r * r))};
  }
  const Scalar scale = R / sinh(R);
  const auto s = detail::sinhc_with_derivatives(r);
  return {scale * s.value, scale * s.d1, scale * s.d2};
}

/// F(R) = (4 pi R^3)^{-1} times the integral of g(U) over B_R, in closed form.
template <typename Scalar>
Scalar eval_F_given_K(Scalar R, Scalar K, const ModelParamsT<Scalar>& p) {
  using std::cosh;
  using std::sinh;
  if (K > Scalar(0)) {
    const Scalar t = R - K;
    const Scalar G = (t * cosh(t) + (R * K - 1) * sinh(t) + K * K * K / 3) / (R * R * R);
    const Scalar ratio = K / R;
    return p.mu * p.sigma_hat * G - p.nu / 3 * ratio * ratio * ratio - p.mu * p.sigma_hat / 3;
  }
  // (R coth R - 1)/R^2 is the derivative of sinh(r)/r at R divided by its value, over R.
  const auto s = detail::sinhc_with_derivatives(R);
  return p.mu * (s.d1 / (s.value * R) - p.sigma_hat / 3);
}

/// Surface-tension-free pressure pi_0 = V(r, R) for R > R*, in closed form:
///   V = mu sigma~ K^3/3 (1/r - 1/R) + mu (U(R) - U(r)) - (mu sigma~ + nu)(R^2 - r^2)/6
/// on K <= r <= R and C + nu r^2/6 inside the core, with C matching values at K.
template <typename Scalar>
RadialValue<Scalar> eval_V_given_K(Scalar r, Scalar R, Scalar K, const ModelParamsT<Scalar>& p) {
  const Scalar a = p.mu;
  const Scalar drive = p.mu * p.sigma_tilde + p.nu;
  const Scalar core = a * p.sigma_tilde * K * K * K / 3;
  const Scalar u_R = eval_U(R, R, K, p).value;
  auto outer = [&](Scalar x) {
    const auto u = eval_U(x, R, K, p);
    return RadialValue<Scalar>{core * (1 / x - 1 / R) + a * (u_R - u.value) - drive * (R * R - x * x) / 6,
                               -core / (x * x) - a * u.d1 + drive * x / 3,
                               2 * core / (x * x * x) - a * u.d2 + drive / 3};
  };
  if (r >= K) return outer(r);
  const Scalar c = outer(K).value - p.nu * K * K / 6;
  return {c + p.nu * r * r / 6, p.nu * r / 3, p.nu / 3};
}

/// Root of sinh(R)/R = 1/sigma_hat: the radius at which a core first appears.
double solve_Rstar(const ModelParams& p, double tol = 1e-12);

/// Core radius K(R); zero when R <= R*.
double solve_K(double R, const ModelParams& p, double tol = 1e-12);

RadialValue<double> eval_U(double r, double R, const ModelParams& p, double tol = 1e-12);
double eval_F(double R, const ModelParams& p, double tol = 1e-12);

/// Throws DomainError when R <= R*.
RadialValue<double> eval_V(double r, double R, const ModelParams& p, double tol = 1e-12);

/// Sampled radial solution on a ball of radius R.
struct RadialProfile {
  ModelParams params;
  double R = 0.0;
  double K = 0.0;
  Vec grid;
  Vec sigma;
  std::optional<Vec> pi;  ///< pi_0 samples, present when R > R*

  double sigma_d1(double r) const { return eval_U(r, R, K, params).d1; }
  double sigma_d2(double r) const { return eval_U(r, R, K, params).d2; }
  double pi_d1(double r) const { return eval_V_given_K(r, R, K, params).d1; }
};

RadialProfile make_profile(double R, const ModelParams& p, int points = 257, double tol = 1e-12);

struct StationaryState {
  ModelParams params;
  double r_star = 0.0;
  double R_s = 0.0;                   ///< root of F
  double K_s = 0.0;
  double R_s_flux_root = 0.0;         ///< independent root of pi_s'(R) = 0 via quadrature
  double flux_identity_residual = 0;  ///< integral identity at R_s, relative to R_s^3
  double sigma_s_prime_at_Rs = 0.0;
  double g_at_1 = 0.0;
  RadialProfile profile;
};

/// Unique positive root of F; also solves the zero-flux characterization
/// independently and records how well the two agree.
StationaryState solve_Rs(const ModelParams& p, double tol = 1e-12, int profile_points = 257);

}  // namespace necrotic
