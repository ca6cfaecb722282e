#include "necrotic/model.hpp"

#include <charconv>

namespace necrotic {

std::string to_string(ParamError e) {
  switch (e) {
    case ParamError::SigmaHatOutOfRange:
      return "sigma_hat_out_of_range";
    case ParamError::NonpositiveMu:
      return "nonpositive_mu";
    case ParamError::NonpositiveNu:
      return "nonpositive_nu";
    case ParamError::NuTooLarge:
      return "nu_too_large";
    case ParamError::NegativeGamma:
      return "negative_gamma";
  }
  return "unknown";
}

namespace {

std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

ModelParams validate(const RawParams& raw) {
  auto fail = [](ParamError code, const std::string& msg) {
    throw ValidationError(code, "invalid parameters: " + msg);
  };
  if (!(raw.sigma_hat > 0.0 && raw.sigma_hat < 1.0)) {
    fail(ParamError::SigmaHatOutOfRange, "sigma_hat out of (0,1): sigma_hat = " + fmt(raw.sigma_hat));
  }
  if (!(raw.mu > 0.0)) {
    fail(ParamError::NonpositiveMu, "mu must be positive: mu = " + fmt(raw.mu));
  }
  if (!(raw.nu > 0.0)) {
    fail(ParamError::NonpositiveNu, "nu must be positive: nu = " + fmt(raw.nu));
  }
  if (!(raw.nu < raw.mu * raw.sigma_hat)) {
    fail(ParamError::NuTooLarge,
         "nu >= mu*sigma_hat: nu = " + fmt(raw.nu) + ", mu*sigma_hat = " + fmt(raw.mu * raw.sigma_hat));
  }
  if (!(raw.gamma >= 0.0)) {
    fail(ParamError::NegativeGamma, "gamma must be nonnegative: gamma = " + fmt(raw.gamma));
  }
  ModelParams p;
  p.sigma_hat = raw.sigma_hat;
  p.mu = raw.mu;
  p.nu = raw.nu;
  p.gamma = raw.gamma;
  p.sigma_tilde = raw.sigma_hat - raw.nu / raw.mu;
  return p;
}

}  // namespace necrotic
