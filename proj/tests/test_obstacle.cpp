#include <doctest.h>

#include <cmath>
#include <numbers>

#include "necrotic/obstacle.hpp"
#include "necrotic/radial.hpp"
#include "necrotic/spectrum.hpp"
#include "necrotic/verify.hpp"

using namespace necrotic;

namespace {

const ModelParams kSet1 = validate({0.5, 1.0, 0.25, 1.0});

SparseRowMat laplacian_1d(int m) {
  SparseRowMat A(m, m);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < m; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < m) t.emplace_back(i, i + 1, -1.0);
  }
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

TEST_CASE("Jacobi spectral radius of the 1D Laplacian") {
  const int m = 20;
  const double exact = std::cos(std::numbers::pi / (m + 1));
  const double est = jacobi_radius(laplacian_1d(m), Vec::Ones(m), 200);
  CHECK(est <= exact + 1e-12);
  CHECK(est > exact - 1e-4);
}

TEST_CASE("projected SOR solves a small obstacle problem") {
  // min 1/2 x'Ax - b'x, x >= 0, with a load that pushes the middle down.
  const int m = 9;
  const SparseRowMat A = laplacian_1d(m);
  Vec b(m);
  b << 1, 1, -1, -3, -3, -3, -1, 1, 1;
  VIOptions opt;
  opt.tol = 1e-14;
  const PsorResult r = projected_sor(A, b, 0.0, Vec::Zero(m), opt);
  REQUIRE(r.converged);
  const Vec w = A * r.x - b;
  for (int i = 0; i < m; ++i) {
    CHECK(r.x(i) >= 0.0);
    CHECK(w(i) > -1e-12);
    CHECK(std::abs(r.x(i) * w(i)) < 1e-12);
  }
  CHECK(r.x(4) == 0.0);
  CHECK(r.x(0) > 0.0);

  VIOptions fixed = opt;
  fixed.omega = 1.0;
  const PsorResult g = projected_sor(A, b, 0.0, Vec::Zero(m), fixed);
  CHECK((g.x - r.x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(g.omega == 1.0);

  fixed.omega = 2.5;
  CHECK_THROWS_AS(projected_sor(A, b, 0.0, Vec::Zero(m), fixed), DomainError);
  CHECK_THROWS_AS(projected_sor(A, Vec::Zero(3), 0.0, Vec::Zero(m), opt), DomainError);
}

TEST_CASE("no active set below R*") {
  const double rs = solve_Rstar(kSet1);
  for (double R : {0.5 * rs, 0.95 * rs}) {
    const VISolution vi = solve_radial_vi(R, kSet1, 128);
    CHECK(vi.converged);
    CHECK_FALSE(vi.active.any());
    CHECK(vi.boundary_volume(0) == 0.0);
  }
}

TEST_CASE("discrete solution is admissible and complementary") {
  const VISolution vi = solve_radial_vi(6.0, kSet1, 256);
  REQUIRE(vi.converged);
  CHECK(vi.complementarity < 1e-8);
  CHECK(vi.min_sigma >= kSet1.sigma_hat);
  CHECK(vi.max_sigma <= 1.0 + 1e-14);
  CHECK(vi.sigma(256, 0) == 1.0);
  CHECK(vi.warnings.empty());
  for (int i = 0; i <= 256; ++i) {
    if (vi.active(i, 0)) {
      CHECK(vi.sigma(i, 0) == kSet1.sigma_hat);
    } else {
      CHECK(vi.multiplier(i, 0) == 0.0);
    }
    CHECK(vi.multiplier(i, 0) >= -1e-12);
  }
}

TEST_CASE("active set grows with R") {
  int prev = 0;
  for (double R : {2.5, 3.0, 4.0, 6.0, 9.0}) {
    const VISolution vi = solve_radial_vi(R, kSet1, 256);
    const double frac = vi.boundary_volume(0) / R;
    int count = 0;
    for (int i = 0; i <= 256; ++i) count += vi.active(i, 0) ? 1 : 0;
    CHECK(count >= prev);
    prev = count;
    CHECK(frac > 0.0);
  }
}

TEST_CASE("free boundary is mesh independent within 2h") {
  for (double R : {3.0, 5.0, 8.0}) {
    const double K = solve_K(R, kSet1);
    for (int n : {96, 200, 400}) {
      const VISolution vi = solve_radial_vi(R, kSet1, n);
      CHECK(std::abs(vi.boundary_volume(0) - K) <= 2.0 * vi.grid_spacing());
      CHECK(std::abs(vi.boundary_nodal(0) - K) <= 2.0 * vi.grid_spacing());
    }
  }
}

TEST_CASE("second-order convergence of sigma, pi and the mean of g") {
  const OracleStudy st = study_radial_oracle(5.0, kSet1, 128);
  REQUIRE(st.levels.size() == 3);
  CHECK(st.sigma_order > 1.8);
  CHECK(st.F_order > 1.8);
  const double pi_order = std::log2(st.levels[0].pi_error / st.levels[2].pi_error) / 2.0;
  CHECK(pi_order > 1.8);
  for (const OracleLevel& l : st.levels) {
    CHECK(l.converged);
    CHECK(std::abs(l.K_volume - st.K) < 2.0 * l.h);
  }
}

TEST_CASE("pressure vanishes at R and recovers F") {
  const double R = 5.0;
  const VISolution vi = solve_radial_vi(R, kSet1, 512);
  const PressureSolution pr = solve_pressure(vi, kSet1);
  CHECK(pr.pi(pr.pi.size() - 1) == 0.0);
  CHECK(pr.mean_g == doctest::Approx(eval_F(R, kSet1)).epsilon(1e-3));
  // -pi'(R) R^2 equals the integral of g r^2, i.e. F R^3.
  CHECK(-pr.boundary_flux == doctest::Approx(pr.mean_g * R).epsilon(1e-12));
  CHECK(pr.boundary_flux == doctest::Approx(eval_V(R, R, kSet1).d1).epsilon(1e-3));
}

TEST_CASE("flat axisymmetric solve reproduces the radial one") {
  AxisymOptions opt;
  opt.n_r = 128;
  opt.n_theta = 16;
  const VISolution ax = solve_axisym_vi(5.0, kSet1, 2, 0.0, opt);
  const VISolution rad = solve_radial_vi(5.0, kSet1, 128, opt.vi);
  REQUIRE(ax.converged);
  for (int j = 0; j < 16; ++j) {
    CHECK((ax.sigma.col(j) - rad.sigma.col(0)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(ax.boundary_volume(j) == doctest::Approx(rad.boundary_volume(0)).epsilon(1e-9));
  }
}

TEST_CASE("perturbed inner boundary is dominated by the forcing degree") {
  const StationaryState s = solve_Rs(kSet1);
  AxisymOptions opt;
  opt.n_r = 128;
  opt.n_theta = 32;
  const VISolution ref = solve_axisym_vi(s.R_s, kSet1, 2, 0.0, opt);
  const VISolution pert = solve_axisym_vi(s.R_s, kSet1, 2, 0.02, opt);
  const ModeMeasurement m = measure_mode(pert, ref, 2);
  CHECK(m.amplitude > 0.0);
  for (int l = 3; l < 12; ++l) CHECK(std::abs(m.coefficients(l)) < 0.05 * m.amplitude);
  CHECK(m.amplitude / 0.02 == doctest::Approx(mode_response_zeta(2, s)).epsilon(0.05));
}

TEST_CASE("Richardson gain removes the linear term") {
  auto c = [](double e) { return 1.3 * e + 0.7 * e * e; };
  CHECK(richardson_gain(c(0.01), 0.01, c(0.02), 0.02) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK_THROWS_AS(richardson_gain(1.0, 0.01, 1.0, 0.01), DomainError);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(solve_radial_vi(0.0, kSet1, 128), DomainError);
  CHECK_THROWS_AS(solve_radial_vi(5.0, kSet1, 32), DomainError);
  CHECK_THROWS_AS(solve_axisym_vi(5.0, kSet1, 9, 0.01), DomainError);
  CHECK_THROWS_AS(solve_axisym_vi(5.0, kSet1, 2, 0.06), DomainError);
  CHECK_THROWS_AS(solve_axisym_vi(5.0, kSet1, 2, std::nan("")), DomainError);
  const VISolution small = solve_radial_vi(1.0, kSet1, 64);
  CHECK_THROWS_AS(measure_mode(small, small, 0), DomainError);
}
