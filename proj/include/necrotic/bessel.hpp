#pragma once

#include "necrotic/types.hpp"

namespace necrotic {

/// Modified spherical Bessel functions of order n at x > 0, held in log form.
///
/// i_n is normalized by i_0(x) = sinh(x)/x and k_n by k_0(x) = exp(-x)/x (the
/// usual pi/2 factor is dropped), so that the Wronskian is
/// i_n k_n' - i_n' k_n = -1/x^2. Logs stay finite for orders and arguments
/// whose values under- or overflow a double.
struct LogSphericalBessel {
  int order = 0;
  double x = 0.0;
  double log_i = 0.0;      ///< ln i_n(x)
  double log_k = 0.0;      ///< ln k_n(x)
  double ratio_i = 0.0;    ///< i_{n+1}(x) / i_n(x)
  double ratio_k = 0.0;    ///< k_{n+1}(x) / k_n(x)

  /// Logarithmic derivatives i_n'/i_n and k_n'/k_n.
  double dlog_i() const { return ratio_i + order / x; }
  double dlog_k() const { return -ratio_k + order / x; }
};

LogSphericalBessel log_spherical_bessel(int order, double x);

/// ln(sinh(x)/x) without overflow or cancellation.
double log_sinhc(double x);

/// ln(exp(x) - 1) for x > 0.
double log_expm1(double x);

}  // namespace necrotic
