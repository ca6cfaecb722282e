#pragma once

#include <string>
#include <utility>
#include <vector>

#include "necrotic/model.hpp"
#include "necrotic/obstacle.hpp"

namespace necrotic {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  ///< first failure, or a one-line summary
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
};

struct SuiteOptions {
  std::vector<RawParams> parameter_sets{{0.5, 1.0, 0.25, 1.0}, {0.3, 2.0, 0.3, 1.0}};
  double tol = 1e-12;
  int k_max = 256;
  int vi_n = 256;  ///< coarsest grid of the refinement ladder
  int n_r = 256;
  int n_theta = 64;
  double axisym_tol = 1e-11;
  std::vector<double> eps{0.01, 0.02};
  bool enforce_budgets = true;
};

inline constexpr int kCriterionCount = 9;

/// Criterion 1..kCriterionCount.
CheckResult run_criterion(int id, const SuiteOptions& opt = {});
std::vector<CheckResult> run_acceptance(const SuiteOptions& opt = {});

/// One level of a radial refinement study.
struct OracleLevel {
  int n = 0;
  double h = 0.0;
  double sigma_error = 0.0;  ///< sup over nodes |sigma_h - U|
  double pi_error = 0.0;     ///< sup over nodes |pi_h - V|, NaN without a core
  double K_nodal = 0.0;
  double K_volume = 0.0;
  double offset = 0.0;       ///< fractional position of K_volume within its cell
  double mean_g = 0.0;       ///< discrete F(R)
  double boundary_flux = 0.0;
  double complementarity = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct OracleStudy {
  double R = 0.0;
  double K = 0.0;  ///< closed form
  double F = 0.0;  ///< closed form
  std::vector<OracleLevel> levels;  ///< n, 2n, 4n
  double sigma_order = 0.0;  ///< log2(e_0 / e_2) / 2
  double F_order = 0.0;
};

/// Three-level study starting near n_lo. The base size is nudged (by at most
/// n_lo / 4) so that the coarse-grid free boundary falls close to a node,
/// keeping its cell offset nearly fixed along the ladder.
OracleStudy study_radial_oracle(double R, const ModelParams& p, int n_lo, const VIOptions& vi = {},
                                double tol = 1e-12);

/// F(R) from direct quadrature of the g(U) average over the ball.
double quadrature_F(double R, const ModelParams& p, double tol = 1e-12);

}  // namespace necrotic
