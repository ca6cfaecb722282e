#include "necrotic/spectral.hpp"

namespace necrotic {

ChebyshevGrid::ChebyshevGrid(int n, double lo, double hi) : a(lo), b(hi) {
  if (n < 2) throw DomainError("ChebyshevGrid: need at least two intervals");
  Vec x(n + 1);
  for (int j = 0; j <= n; ++j) x(j) = std::cos(std::numbers::pi * j / n);
  Vec c = Vec::Ones(n + 1);
  c(0) = c(n) = 2.0;
  diff.resize(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      diff(i, j) = (c(i) / c(j)) * sign / (x(i) - x(j));
    }
  }
  // Negative-sum trick keeps each row annihilating constants to rounding.
  for (int i = 0; i <= n; ++i) {
    diff(i, i) = 0.0;
    diff(i, i) = -diff.row(i).sum();
  }
  const double scale = 0.5 * (hi - lo);
  nodes = Vec::Constant(n + 1, 0.5 * (hi + lo)) + scale * x;
  diff /= scale;
}

double ChebyshevGrid::interpolate(const Vec& values, double r) const {
  const Eigen::Index n = nodes.size() - 1;
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j <= n; ++j) {
    const double d = r - nodes(j);
    if (d == 0.0) return values(j);
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    num += w * values(j) / d;
    den += w / d;
  }
  return num / den;
}

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
  if (n < 1) throw DomainError("GaussLegendre: need at least one node");
  for (int i = 0; i < n; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre_with_derivative(n, x);
    nodes(i) = x;
    weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace necrotic
