#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "necrotic/model.hpp"
#include "necrotic/types.hpp"

namespace necrotic {

using SparseRowMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct VIOptions {
  double tol = 1e-12;   ///< stop when the largest nodal update falls below this
  double omega = 0.0;   ///< relaxation factor; 0 selects it from a Jacobi spectral estimate
  long max_sweeps = 0;  ///< 0 means 50 times the number of unknowns
};

/// Result of projected symmetric SOR on  min 1/2 x'Ax - b'x  subject to x >= lower.
struct PsorResult {
  Vec x;
  long sweeps = 0;
  double last_update = 0.0;
  double omega = 0.0;
  bool converged = false;
};

PsorResult projected_sor(const SparseRowMat& A, const Vec& b, double lower, Vec x0,
                         const VIOptions& opt);

/// Largest eigenvalue of the Jacobi iteration matrix I - D^{-1}A, estimated by
/// power iteration started from `guess`.
double jacobi_radius(const SparseRowMat& A, Vec guess, int iterations = 60);

/// Discrete obstacle solution. The radial case is a single column. In the
/// axisymmetric case node (i, j) sits at r = s_i b(x_j), x_j = cos(theta_j) a
/// Gauss-Legendre node and b the outer boundary; row 0 is the shared centre.
struct VISolution {
  bool axisymmetric = false;
  double R = 0.0;
  int n = 0;                 ///< radial intervals
  Vec s;                     ///< scaled radial nodes i/n, i = 0..n
  Vec x;                     ///< column abscissae cos(theta_j)
  Vec weights;               ///< Gauss weights per column (2 in the radial case)
  Vec column_radius;         ///< outer radius b(x_j) per column
  Mat sigma;                 ///< (n + 1) x columns
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> active;  ///< sigma == sigma_hat
  Mat multiplier;            ///< (A sigma - b) per node, zero off the active set
  Vec boundary_nodal;        ///< free boundary from the last active / first inactive nodes
  Vec boundary_volume;       ///< free boundary from the multiplier mass, (3 m / w)^{1/3}
  double complementarity = 0.0;  ///< max_i |min(sigma - sigma_hat, (A sigma - b)_i / V_i)|
  double min_sigma = 0.0;
  double max_sigma = 0.0;
  long iterations = 0;
  double last_update = 0.0;
  double omega = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;

  double grid_spacing() const { return R / n; }
  /// Nodal radii of column j.
  Vec radii(int j = 0) const { return s * column_radius(j); }
};

/// Obstacle problem for -Delta sigma + sigma >= 0, sigma >= sigma_hat on the
/// ball of radius R with sigma = 1 on the boundary. Finite volumes on n
/// uniform intervals; the centre cell carries the symmetry condition.
VISolution solve_radial_vi(double R, const ModelParams& p, int n, const VIOptions& opt = {});

struct PressureSolution {
  Vec r;
  Vec pi;
  Vec source;                ///< integrated g(sigma) per cell
  double boundary_flux = 0;  ///< d pi / dr at R
  double mean_g = 0;         ///< (1/R^3) int_0^R g r^2 dr; the discrete F(R)
};

/// -Delta pi = g(sigma) with pi(R) = 0 on the grid of a converged radial
/// solution. The necrotic volume is taken from the obstacle multiplier.
PressureSolution solve_pressure(const VISolution& vi, const ModelParams& p);

struct AxisymOptions {
  int n_r = 256;
  int n_theta = 64;
  VIOptions vi{1e-11, 0.0, 0};
};

/// Obstacle problem on {r < R(1 + eps P_k(cos theta))}.
VISolution solve_axisym_vi(double R, const ModelParams& p, int k, double eps,
                           const AxisymOptions& opt = {});

/// Relative inner-boundary perturbation of `perturbed` against `reference`
/// (same grids), with its Legendre coefficients.
struct ModeMeasurement {
  Vec eta;           ///< K_j / K_ref - 1 per column
  Vec coefficients;  ///< Legendre coefficients of eta, degrees 0..columns-1
  double amplitude = 0.0;  ///< coefficient of degree k
};

ModeMeasurement measure_mode(const VISolution& perturbed, const VISolution& reference, int k);

/// Two-amplitude extrapolation of c(eps)/eps to eps -> 0, removing the
/// O(eps) term.
double richardson_gain(double c1, double eps1, double c2, double eps2);

}  // namespace necrotic
