#pragma once

#include <optional>

#include "necrotic/model.hpp"
#include "necrotic/types.hpp"

namespace necrotic {

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  int samples = 512;       ///< dense-output samples, including both ends
  double root_tol = 1e-12; ///< passed to the K(R) root solve inside F
  long max_steps = 1000000;
};

/// Radius history of the radially symmetric tumor.
struct Trajectory {
  Vec times;
  Vec radii;
  Vec core_radii;                     ///< K(R(t)), zero without a core
  std::optional<double> onset_time;   ///< first time with R > R*
  double r_star = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// Integrates R' = R F(R) from R(0) = R0 over [0, horizon] (horizon < 0
/// integrates backward in time). Crossing R = R* is handled as an event: the
/// step is cut at the crossing and restarted so that each step sees a single
/// branch of F.
Trajectory integrate(double R0, double horizon, const ModelParams& p,
                     const StepControl& control = {});

}  // namespace necrotic
