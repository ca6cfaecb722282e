#pragma once

#include <string>

#include "necrotic/types.hpp"

namespace necrotic {

/// Dimensionless kinetic constants with consumption rate and boundary
/// nutrient level both scaled to one.
template <typename Scalar>
struct ModelParamsT {
  Scalar sigma_hat{};    ///< viability threshold, in (0, 1)
  Scalar mu{};           ///< proliferation coefficient
  Scalar nu{};           ///< dissolution rate of dead cells
  Scalar gamma{};        ///< surface tension coefficient
  Scalar sigma_tilde{};  ///< sigma_hat - nu / mu, set by validate()

  template <typename Other>
  ModelParamsT<Other> cast() const {
    return {Other(sigma_hat), Other(mu), Other(nu), Other(gamma), Other(sigma_tilde)};
  }
};

using ModelParams = ModelParamsT<double>;

/// Unvalidated parameter tuple as read from a config file or the command line.
struct RawParams {
  double sigma_hat = 0.5;
  double mu = 1.0;
  double nu = 0.25;
  double gamma = 1.0;
};

enum class ParamError {
  SigmaHatOutOfRange,
  NonpositiveMu,
  NonpositiveNu,
  NuTooLarge,
  NegativeGamma,
};

std::string to_string(ParamError e);

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ParamError code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}
  ParamError code() const noexcept { return code_; }

 private:
  ParamError code_;
};

/// Checks the admissibility constraints and fills in sigma_tilde.
/// Throws ValidationError with a distinct code per violated constraint.
ModelParams validate(const RawParams& raw);

/// Heaviside with H(0) = 0.
template <typename Scalar>
constexpr Scalar heaviside(Scalar s) {
  return s > Scalar(0) ? Scalar(1) : Scalar(0);
}

/// Nutrient consumption f(sigma) = sigma H(sigma - sigma_hat).
template <typename Scalar>
Scalar kinetics_f(Scalar sigma, const ModelParamsT<Scalar>& p) {
  return sigma * heaviside(sigma - p.sigma_hat);
}

/// Net proliferation g(sigma) = mu (sigma - sigma_tilde) H(sigma - sigma_hat) - nu.
template <typename Scalar>
Scalar kinetics_g(Scalar sigma, const ModelParamsT<Scalar>& p) {
  return p.mu * (sigma - p.sigma_tilde) * heaviside(sigma - p.sigma_hat) - p.nu;
}

template <typename Scalar>
Scalar g_at_one(const ModelParamsT<Scalar>& p) {
  return kinetics_g(Scalar(1), p);
}

}  // namespace necrotic
