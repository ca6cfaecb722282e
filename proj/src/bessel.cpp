#include "necrotic/bessel.hpp"

#include <cmath>
#include <vector>

namespace necrotic {

double log_sinhc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) return ax * ax / 6.0;
  if (ax < 20.0) return std::log(std::sinh(ax) / ax);
  return ax - std::log(2.0 * ax) + std::log1p(-std::exp(-2.0 * ax));
}

double log_expm1(double x) {
  if (x <= 0.0) throw DomainError("log_expm1: argument must be positive");
  if (x < 30.0) return std::log(std::expm1(x));
  return x + std::log1p(-std::exp(-x));
}

namespace {

// Ratios r_m = i_m / i_{m-1} for m = 1..n+1 by backward recurrence
// r_m = 1 / ((2m+1)/x + r_{m+1}). The start index is pushed out until the
// ratios at m <= n+1 stop changing.
std::vector<double> i_ratios(int n, double x) {
  int start = n + 32 + static_cast<int>(2.0 * x);
  std::vector<double> prev;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> r(n + 2, 0.0);
    double next = 0.0;
    for (int m = start; m >= 1; --m) {
      next = 1.0 / ((2.0 * m + 1.0) / x + next);
      if (m <= n + 1) r[m] = next;
    }
    if (!prev.empty()) {
      bool settled = true;
      for (int m = 1; m <= n + 1; ++m) {
        if (std::abs(r[m] - prev[m]) > 1e-16 * std::abs(r[m])) {
          settled = false;
          break;
        }
      }
      if (settled) return r;
    }
    prev = std::move(r);
    start *= 2;
  }
  return prev;
}

}  // namespace

LogSphericalBessel log_spherical_bessel(int n, double x) {
  if (n < 0) throw DomainError("log_spherical_bessel: order must be nonnegative");
  if (!(x > 0.0)) throw DomainError("log_spherical_bessel: argument must be positive");
  LogSphericalBessel out;
  out.order = n;
  out.x = x;

  const std::vector<double> r = i_ratios(n, x);
  double log_i = log_sinhc(x);
  for (int m = 1; m <= n; ++m) log_i += std::log(r[m]);
  out.log_i = log_i;
  out.ratio_i = r[n + 1];

  // Forward recurrence on q_m = k_m / k_{m-1}: q_1 = 1 + 1/x,
  // q_{m+1} = (2m+1)/x + 1/q_m. Stable for the decaying solution.
  double log_k = -x - std::log(x);
  double q = 1.0 + 1.0 / x;
  for (int m = 1; m <= n; ++m) {
    log_k += std::log(q);
    q = (2.0 * m + 1.0) / x + 1.0 / q;
  }
  out.log_k = log_k;
  out.ratio_k = q;
  return out;
}

}  // namespace necrotic
