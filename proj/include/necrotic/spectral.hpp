#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "necrotic/types.hpp"

namespace necrotic {

/// Chebyshev-Lobatto points mapped onto [a, b], ordered from b down to a,
/// together with the first-derivative collocation matrix.
struct ChebyshevGrid {
  Vec nodes;
  Mat diff;
  double a = 0.0;
  double b = 0.0;

  ChebyshevGrid(int n, double lo, double hi);

  /// Barycentric interpolation of nodal values at r.
  double interpolate(const Vec& values, double r) const;
};

/// Legendre polynomial P_n(x) and its derivative via the three-term recurrence.
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_with_derivative(int n, Scalar x) {
  if (n == 0) return {Scalar(1), Scalar(0)};
  Scalar p_prev = 1, p = x;
  for (int l = 1; l < n; ++l) {
    const Scalar next = (Scalar(2 * l + 1) * x * p - Scalar(l) * p_prev) / Scalar(l + 1);
    p_prev = p;
    p = next;
  }
  const Scalar one_minus = Scalar(1) - x * x;
  const Scalar dp = one_minus == Scalar(0)
                        ? Scalar(0.5 * n * (n + 1)) * (x > 0 ? Scalar(1) : (n % 2 ? Scalar(1) : Scalar(-1)))
                        : Scalar(n) * (p_prev - x * p) / one_minus;
  return {p, dp};
}

template <typename Scalar>
Scalar legendre(int n, Scalar x) {
  return legendre_with_derivative(n, x).first;
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
struct GaussLegendre {
  Vec nodes;
  Vec weights;
  explicit GaussLegendre(int n);
};

}  // namespace necrotic
