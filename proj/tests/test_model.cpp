#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "necrotic/model.hpp"

using namespace necrotic;

namespace {

ParamError code_of(const RawParams& raw) {
  try {
    validate(raw);
  } catch (const ValidationError& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return ParamError::NegativeGamma;
}

}  // namespace

TEST_CASE("validate accepts the default set and stores sigma_tilde") {
  const ModelParams p = validate({0.5, 1.0, 0.25, 1.0});
  CHECK(p.sigma_tilde == 0.25);
  CHECK(p.sigma_tilde == p.sigma_hat - p.nu / p.mu);
  CHECK(p.gamma == 1.0);
}

TEST_CASE("validate rejects each constraint with its own code") {
  CHECK(code_of({1.2, 1.0, 0.1, 1.0}) == ParamError::SigmaHatOutOfRange);
  CHECK(code_of({0.0, 1.0, 0.1, 1.0}) == ParamError::SigmaHatOutOfRange);
  CHECK(code_of({std::nan(""), 1.0, 0.1, 1.0}) == ParamError::SigmaHatOutOfRange);
  CHECK(code_of({0.5, 0.0, 0.1, 1.0}) == ParamError::NonpositiveMu);
  CHECK(code_of({0.5, 1.0, -0.1, 1.0}) == ParamError::NonpositiveNu);
  CHECK(code_of({0.5, 1.0, 0.6, 1.0}) == ParamError::NuTooLarge);
  CHECK(code_of({0.5, 1.0, 0.5, 1.0}) == ParamError::NuTooLarge);
  CHECK(code_of({0.5, 1.0, 0.25, -1.0}) == ParamError::NegativeGamma);

  std::set<std::string> names;
  for (ParamError e : {ParamError::SigmaHatOutOfRange, ParamError::NonpositiveMu,
                       ParamError::NonpositiveNu, ParamError::NuTooLarge, ParamError::NegativeGamma}) {
    names.insert(to_string(e));
  }
  CHECK(names.size() == 5);
}

TEST_CASE("diagnostics name the violated constraint") {
  try {
    validate({0.5, 1.0, 0.6, 1.0});
    FAIL("no error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("nu >= mu*sigma_hat") != std::string::npos);
  }
  try {
    validate({1.2, 1.0, 0.1, 1.0});
    FAIL("no error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("sigma_hat out of (0,1)") != std::string::npos);
  }
}

TEST_CASE("kinetics at the threshold use the dead branch") {
  const ModelParams p = validate({0.5, 1.0, 0.25, 1.0});
  CHECK(kinetics_f(p.sigma_hat, p) == 0.0);
  CHECK(kinetics_g(p.sigma_hat, p) == -p.nu);
  CHECK(g_at_one(p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kinetics_f(0.3, p) == 0.0);
  CHECK(kinetics_f(0.7, p) == 0.7);
}

TEST_CASE("above the threshold g reduces to mu (sigma - sigma_hat)") {
  for (const RawParams& raw : {RawParams{0.5, 1.0, 0.25, 1.0}, RawParams{0.3, 2.0, 0.3, 0.0}}) {
    const ModelParams p = validate(raw);
    for (int i = 1; i <= 50; ++i) {
      const double s = p.sigma_hat + (1.0 - p.sigma_hat) * i / 50.0;
      CHECK(std::abs(kinetics_g(s, p) - p.mu * (s - p.sigma_hat)) <= 4 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("f is nondecreasing away from the threshold") {
  const ModelParams p = validate({0.5, 1.0, 0.25, 1.0});
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;
    if (s == p.sigma_hat) continue;
    CHECK(kinetics_f(s, p) >= prev);
    prev = kinetics_f(s, p);
  }
}

TEST_CASE("parameters cast to another scalar type") {
  const ModelParams p = validate({0.5, 1.0, 0.25, 1.0});
  const auto q = p.cast<long double>();
  CHECK(q.sigma_tilde == 0.25L);
}
