#include <doctest.h>

#include <cmath>

#include "necrotic/quadrature.hpp"
#include "necrotic/radial.hpp"
#include "necrotic/spectrum.hpp"

using namespace necrotic;

namespace {

const StationaryState& set1() {
  static const StationaryState s = solve_Rs(validate({0.5, 1.0, 0.25, 1.0}));
  return s;
}
const StationaryState& set2() {
  static const StationaryState s = solve_Rs(validate({0.3, 2.0, 0.3, 1.0}));
  return s;
}
const GammaStar& gs1() {
  static const GammaStar g = find_gamma_star(set1());
  return g;
}

double vbar_prime(int k, const StationaryState& s) {
  ModeSolution m = solve_ubar(k, s);
  return solve_vbar_prime(m, s);
}

}  // namespace

TEST_CASE("mode solution boundary values and equation") {
  const StationaryState& s = set1();
  for (int k : {0, 2, 9, 60}) {
    const ModeSolution m(k, s.K_s, s.R_s);
    CHECK(std::abs(m.value(s.K_s)) < 1e-14);
    CHECK(m.value(s.R_s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.ubar_prime_K() > 0.0);
    CHECK(m.log_ubar_prime_K() == doctest::Approx(std::log(m.ubar_prime_K())).epsilon(1e-14));
    // u'' + 2(k+1)u'/r = u checked by centred differences
    const double h = 1e-4;
    for (double t : {0.2, 0.5, 0.8}) {
      const double r = s.K_s + t * (s.R_s - s.K_s);
      const double d2 = (m.derivative(r + h) - m.derivative(r - h)) / (2 * h);
      const double res = d2 + 2.0 * (k + 1) * m.derivative(r) / r - m.value(r);
      CHECK(std::abs(res) < 1e-6 * (1.0 + std::abs(d2)));
    }
  }
}

TEST_CASE("degree-0 flux balance") {
  // Integrating r^2 u'' + 2 r u' = r^2 u over the shell.
  for (const StationaryState* s : {&set1(), &set2()}) {
    const ModeSolution m(0, s->K_s, s->R_s);
    const double R = s->R_s, K = s->K_s;
    const double mass =
        integrate([&](double t) { return m.value(t) * (t / R) * (t / R); }, K, R, 1e-15).value;
    CHECK(m.ubar_prime_R() == doctest::Approx(m.ubar_prime_K() * (K / R) * (K / R) + mass).epsilon(1e-12));
  }
}

TEST_CASE("closed form agrees with collocation") {
  for (const StationaryState* s : {&set1(), &set2()}) {
    for (int k = 0; k <= 32; k += 4) {
      const ModeSolution m = solve_ubar(k, *s);
      CHECK(m.crosschecked);
      CHECK(m.crosscheck_error < 1e-8);
      CHECK_FALSE(m.precision_loss);
    }
  }
  CHECK_FALSE(solve_ubar(40, set1()).crosschecked);
}

TEST_CASE("v_k'(R_s) against high-precision references") {
  const double ref1[] = {.757373575717396,  .6601761878560289, .5759462275623958, .5040491345086721,
                         .4434017278439317, .3926501028656764, .3503454714742809, .3150839395003975,
                         .2855965686663242, .2607927016493955};
  for (int k = 0; k < 10; ++k) {
    CHECK(vbar_prime(k, set1()) == doctest::Approx(ref1[k]).epsilon(1e-10));
  }
  CHECK(vbar_prime(128, set1()) == doctest::Approx(.022291951446764702).epsilon(1e-9));
  CHECK(vbar_prime(0, set2()) == doctest::Approx(.8404261064213927).epsilon(1e-10));
  CHECK(vbar_prime(1, set2()) == doctest::Approx(.787272565821725).epsilon(1e-10));
  CHECK(vbar_prime(2, set2()) == doctest::Approx(.7373086312798318).epsilon(1e-10));
}

TEST_CASE("flux relation agrees with the direct jump-problem solve") {
  for (int k : {0, 1, 3, 17, 32}) {
    ModeSolution m = solve_ubar(k, set2());
    solve_vbar_prime(m, set2());
    REQUIRE(m.vbar_prime_R_direct.has_value());
    CHECK(*m.vbar_prime_R == doctest::Approx(*m.vbar_prime_R_direct).epsilon(1e-9));
  }
}

TEST_CASE("v_k'(R_s) decreases in k and k v_k' stays bounded") {
  double prev = 1e300;
  double kv_max = 0.0;
  for (int k = 0; k <= 512; k = k < 16 ? k + 1 : 2 * k) {
    const double v = vbar_prime(k, set1());
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
    kv_max = std::max(kv_max, k * v);
  }
  CHECK(kv_max < 10.0);
}

TEST_CASE("eigenvalues, critical tensions and their factorization") {
  const StationaryState& s = set1();
  const ModeSolution m0 = solve_ubar(0, s);
  ModeSolution m0v = m0;
  solve_vbar_prime(m0v, s);
  CHECK(eval_ak(0, 1.0, make_pieces(m0v, s)) == doctest::Approx(-0.4252328528167576).epsilon(1e-10));

  const double ref_gamma[] = {3.073993581795216, 1.5194389526364356, 0.8790264921456409};
  for (int k = 2; k <= 4; ++k) {
    ModeSolution m = solve_ubar(k, s);
    solve_vbar_prime(m, s);
    const ModePieces pc = make_pieces(m, s);
    CHECK(eval_gamma_k(k, pc) == doctest::Approx(ref_gamma[k - 2]).epsilon(1e-10));
    CHECK(eval_gamma_k(k, pc) > 0.0);
    for (double g : {0.0, 0.7, 3.0, 11.0}) {
      CHECK(eval_ak(k, g, pc) == doctest::Approx(eval_ak_factored(k, g, pc)).epsilon(1e-11));
    }
  }

  ModeSolution m2 = solve_ubar(2, set2());
  solve_vbar_prime(m2, set2());
  CHECK(eval_gamma_k(2, make_pieces(m2, set2())) == doctest::Approx(46.17191433638067).epsilon(1e-10));
  ModeSolution n0 = solve_ubar(0, set2());
  solve_vbar_prime(n0, set2());
  CHECK(eval_ak(0, 1.0, make_pieces(n0, set2())) == doctest::Approx(-1.2063163784797137).epsilon(1e-10));
}

TEST_CASE("gamma* is certified and attained at k = 2") {
  const GammaStar& g = gs1();
  CHECK(g.certified);
  CHECK(g.argmax_k == 2);
  CHECK(g.value == doctest::Approx(3.073993581795207).epsilon(1e-10));
  CHECK(g.tail_bound < g.value);
  CHECK(g.max_crosscheck_error < 1e-8);
  CHECK(g.precision_loss_modes == 0);
  CHECK(static_cast<int>(g.pieces.size()) == g.k_max_used + 1);
  const double last = eval_ak(g.k_max_used, 1.0, g.pieces.back());
  CHECK(std::isfinite(last));
  CHECK(last < 0.0);
}

TEST_CASE("translations are neutral: a_1 vanishes") {
  const GammaStar& g = gs1();
  const ModePieces& p1 = g.pieces[1];
  for (double gamma : {0.0, 1.0, 50.0}) {
    CHECK(std::abs(eval_ak(1, gamma, p1)) < 1e-10 * std::abs(p1.g_at_1 * p1.R_s));
  }
  CHECK(kernel_dimension(g, 2.0 * g.value) == 3);
  CHECK(kernel_dimension(g, g.value) == 8);
}

TEST_CASE("classification") {
  const GammaStar& g = gs1();
  CHECK(classify(g, 2.0 * g.value) == Verdict::StableModuloTranslations);
  CHECK(classify(g, 0.5 * g.value) == Verdict::Unstable);
  CHECK(classify(g, g.value) == Verdict::Neutral);
  CHECK(to_string(Verdict::StableModuloTranslations) == "stable modulo translations");
}

TEST_CASE("linearization acts diagonally and negates on stable modes") {
  const GammaStar& g = gs1();
  const std::vector<ModePieces> pieces(g.pieces.begin(), g.pieces.begin() + 5);
  Vec c = Vec::LinSpaced(25, 1.0, 25.0);
  const Vec out = apply_linearization(c, pieces, 2.0 * g.value);
  CHECK(out(0) < 0.0);
  for (int i = 1; i <= 3; ++i) CHECK(std::abs(out(i)) < 1e-9 * c(i));
  for (int i = 4; i < 25; ++i) CHECK(out(i) < 0.0);
  CHECK(apply_linearization(-c, pieces, 0.3) == -apply_linearization(c, pieces, 0.3));
  Vec y1 = Vec::Zero(25);
  y1.segment(1, 3) << 0.4, -1.0, 2.5;
  CHECK(apply_linearization(y1, pieces, 0.3).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(apply_linearization(Vec::Ones(7), pieces, 1.0), DomainError);
}

TEST_CASE("inner-boundary response") {
  const StationaryState& s = set1();
  CHECK(mode_response_zeta(0, s) == doctest::Approx(1.360197800068915).epsilon(1e-11));
  CHECK(mode_response_zeta(1, s) == doctest::Approx(1.3283554821643393).epsilon(1e-11));
  CHECK(mode_response_zeta(2, s) == doctest::Approx(1.2676366260733245).epsilon(1e-11));
  CHECK(mode_response_zeta(0, set2()) == doctest::Approx(1.1902139602350783).epsilon(1e-11));
  CHECK(mode_response_zeta(2, set2()) == doctest::Approx(1.1637879703631222).epsilon(1e-11));

  // Degree 0 is the relative sensitivity of the core radius to R.
  const double h = 1e-5;
  const double dK = (solve_K(s.R_s + h, s.params) - solve_K(s.R_s - h, s.params)) / (2 * h);
  CHECK(mode_response_zeta(0, s) == doctest::Approx(dK * s.R_s / s.K_s).epsilon(1e-8));

  double prev = 1e300;
  for (int k = 0; k <= 200; k += 10) {
    const double z = mode_response_zeta(k, s);
    CHECK(z < prev);
    prev = z;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("report identities") {
  const SpectrumReport rep = build_spectrum_report(set2(), 1.0);
  CHECK(rep.identities.a1_relative < 1e-10);
  CHECK(rep.identities.ubar1_sup < 1e-10);
  CHECK(rep.identities.vbar1_sup < 1e-10);
  CHECK(rep.identities.vbar1_slope < 1e-10);
  CHECK(rep.identities.sigma_dd_at_K < 1e-10);
  CHECK(rep.identities.pi_dd_at_R < 1e-10);
  CHECK(rep.identities.factorization < 1e-10);
  CHECK(rep.verdict == Verdict::Unstable);
  CHECK(rep.rows.size() == 65);
  CHECK(std::isnan(rep.rows[1].gamma_k));
}
