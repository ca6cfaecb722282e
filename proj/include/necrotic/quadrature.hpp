#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "necrotic/types.hpp"

namespace necrotic {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol |I|).
template <typename F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                     int max_intervals = 2000) {
  if (a == b) return {0.0, 0.0, 0, true};
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gauss_kronrod_15(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  int count = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && count < max_intervals) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    const detail::Segment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, count, error <= std::max(abs_tol, rel_tol * std::abs(value))};
}

/// Splits [a, b] at the given interior breakpoints and integrates each piece.
template <typename F>
QuadResult integrate_pieces(F&& f, std::vector<double> points, double abs_tol,
                            double rel_tol = 0.0) {
  std::sort(points.begin(), points.end());
  QuadResult total{0.0, 0.0, 0, true};
  const double piece_tol = abs_tol / std::max<std::size_t>(1, points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const QuadResult r = integrate(f, points[i], points[i + 1], piece_tol, rel_tol);
    total.value += r.value;
    total.error += r.error;
    total.intervals += r.intervals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

}  // namespace necrotic
