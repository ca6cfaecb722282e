#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "necrotic/config.hpp"
#include "necrotic/dynamics.hpp"
#include "necrotic/obstacle.hpp"
#include "necrotic/radial.hpp"
#include "necrotic/spectrum.hpp"
#include "necrotic/verify.hpp"
#include "report.hpp"

namespace necrotic::cli {
namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

ordered_json params_json(const ModelParams& p) {
  return {{"sigma_hat", p.sigma_hat}, {"mu", p.mu},       {"nu", p.nu},
          {"gamma", p.gamma},         {"sigma_tilde", p.sigma_tilde}};
}

void check_limit(Reporter& rep, const std::string& name, double value, double limit) {
  if (!(value <= limit)) rep.fail(name + " = " + std::to_string(value) + " exceeds " + std::to_string(limit));
}

int cmd_check(const RunConfig& cfg, Reporter& rep) {
  ordered_json res;
  try {
    const ModelParams p = validate(cfg.params);
    res["valid"] = true;
    res["params"] = params_json(p);
    res["g_at_1"] = g_at_one(p);
    rep.write_json("check.json", res);
    std::printf("parameters valid: sigma_tilde = %.17g, g(1) = %.17g\n", p.sigma_tilde, g_at_one(p));
    return kOk;
  } catch (const ValidationError& e) {
    res["valid"] = false;
    res["error"] = to_string(e.code());
    res["message"] = e.what();
    rep.fail(e.what());
    rep.write_json("check.json", res);
    std::fprintf(stderr, "%s\n", e.what());
    return kValidation;
  }
}

int cmd_stationary(const RunConfig& cfg, Reporter& rep) {
  const ModelParams p = validate(cfg.params);
  const StationaryState s = solve_Rs(p, cfg.tol, cfg.samples);
  const double F_rs = eval_F(s.R_s, p, cfg.tol);
  const double pi_K = eval_V_given_K(s.K_s, s.R_s, s.K_s, p).d1;
  const RadialValue<double> vR = eval_V_given_K(s.R_s, s.R_s, s.K_s, p);

  ordered_json res;
  res["params"] = params_json(p);
  res["R_star"] = s.r_star;
  res["R_s"] = s.R_s;
  res["K_s"] = s.K_s;
  res["R_s_flux_root"] = s.R_s_flux_root;
  res["F_at_R_s"] = F_rs;
  res["flux_identity_residual"] = s.flux_identity_residual;
  res["root_agreement"] = std::abs(s.R_s - s.R_s_flux_root);
  res["sigma_s_prime_at_R_s"] = s.sigma_s_prime_at_Rs;
  res["g_at_1"] = s.g_at_1;
  res["pi_s_prime_at_K_s"] = pi_K;
  res["pi_s_prime_at_R_s"] = vR.d1;
  res["pi_s_second_at_R_s"] = vR.d2;
  check_limit(rep, "|R_s(F) - R_s(flux)|", std::abs(s.R_s - s.R_s_flux_root), 1e-8);
  check_limit(rep, "|pi_s'(K_s) - nu K_s / 3|", std::abs(pi_K - p.nu * s.K_s / 3.0), 1e-9);
  check_limit(rep, "|pi_s''(R_s) + g(1)|", std::abs(vR.d2 + s.g_at_1), 1e-9);
  rep.write_json("stationary.json", res);

  std::vector<std::vector<double>> rows;
  const RadialProfile& prof = s.profile;
  for (Eigen::Index i = 0; i < prof.grid.size(); ++i) {
    const double r = prof.grid(i);
    rows.push_back({r, prof.sigma(i), prof.pi ? (*prof.pi)(i) : NAN, prof.sigma_d1(r), prof.sigma_d2(r),
                    prof.pi ? prof.pi_d1(r) : NAN});
  }
  rep.write_csv("profile.csv", {"r", "sigma", "pi", "sigma_d1", "sigma_d2", "pi_d1"}, rows);

  rows.clear();
  const int pts = 256;
  for (int m = 0; m < pts; ++m) {
    const double R = std::exp(std::log(1e-2) + (std::log(50.0) - std::log(1e-2)) * m / (pts - 1));
    rows.push_back({R, solve_K(R, p, cfg.tol), eval_F(R, p, cfg.tol)});
  }
  rep.write_csv("radial_curve.csv", {"R", "K", "F"}, rows);

  std::printf("R* = %.15g\nR_s = %.15g\nK_s = %.15g\nF(R_s) = %.3g\n", s.r_star, s.R_s, s.K_s, F_rs);
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, Reporter& rep) {
  const ModelParams p = validate(cfg.params);
  const StationaryState s = solve_Rs(p, cfg.tol);
  const double R0 = cfg.R0 > 0.0 ? cfg.R0 : 0.5 * s.R_s;
  StepControl sc;
  sc.rtol = cfg.rtol;
  sc.atol = cfg.atol;
  sc.samples = cfg.samples;
  sc.root_tol = cfg.tol;
  const Trajectory tr = integrate(R0, cfg.horizon, p, sc);

  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < tr.times.size(); ++i) {
    rows.push_back({tr.times(i), tr.radii(i), tr.core_radii(i)});
  }
  rep.write_csv("trajectory.csv", {"t", "R", "K"}, rows);

  const double final_R = tr.radii(tr.radii.size() - 1);
  ordered_json res;
  res["R0"] = R0;
  res["horizon"] = cfg.horizon;
  res["R_star"] = tr.r_star;
  res["R_s"] = s.R_s;
  res["onset_time"] = tr.onset_time ? ordered_json(*tr.onset_time) : ordered_json(nullptr);
  res["final_R"] = final_R;
  res["final_residual"] = std::abs(final_R - s.R_s);
  res["accepted_steps"] = tr.accepted_steps;
  res["rejected_steps"] = tr.rejected_steps;
  rep.write_json("evolve.json", res);
  std::printf("R(%g) = %.15g, |R - R_s| = %.3g\n", cfg.horizon, final_R, std::abs(final_R - s.R_s));
  if (tr.onset_time) std::printf("core onset at t = %.12g\n", *tr.onset_time);
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg, Reporter& rep) {
  const ModelParams p = validate(cfg.params);
  const StationaryState s = solve_Rs(p, cfg.tol);
  SpectrumOptions so;
  so.tol = cfg.tol;
  so.k_max = cfg.k_max;
  so.k_max_cap = cfg.k_max_cap;
  so.table_k_max = cfg.table_k_max;
  so.crosscheck_up_to = cfg.crosscheck_up_to;
  const SpectrumReport sr = build_spectrum_report(s, p.gamma, so);
  const GammaStar& gs = sr.gamma_star;

  std::vector<std::vector<double>> rows;
  for (const SpectrumRow& r : sr.rows) rows.push_back({double(r.k), r.vbar_prime_R, r.gamma_k, r.a_k});
  rep.write_csv("spectrum.csv", {"k", "vbar_prime_R", "gamma_k", "a_k"}, rows);

  const IdentityResiduals& id = sr.identities;
  if (!gs.certified) rep.fail("gamma* not certified at k_max_cap = " + std::to_string(cfg.k_max_cap));
  check_limit(rep, "|a_1| / |g(1) R_s|", id.a1_relative, 1e-8);
  check_limit(rep, "ubar_1 identity", id.ubar1_sup, 1e-9);
  check_limit(rep, "vbar_1 identity", id.vbar1_sup, 1e-9);
  check_limit(rep, "vbar_1'(R_s) identity", id.vbar1_slope, 1e-9);
  check_limit(rep, "sigma_s''(K_s+) identity", id.sigma_dd_at_K, 1e-9);
  check_limit(rep, "pi_s''(R_s) identity", id.pi_dd_at_R, 1e-9);
  check_limit(rep, "a_k factorization", id.factorization, 1e-10);
  check_limit(rep, "closed form vs collocation", gs.max_crosscheck_error, 1e-8);
  if (gs.precision_loss_modes > 0) {
    rep.fail(std::to_string(gs.precision_loss_modes) + " modes lost precision");
  }

  ordered_json res;
  res["params"] = params_json(p);
  res["R_s"] = sr.R_s;
  res["K_s"] = sr.K_s;
  res["gamma"] = sr.gamma;
  res["gamma_star"] = gs.value;
  res["argmax_k"] = gs.argmax_k;
  res["k_max"] = sr.k_max;
  res["certified"] = gs.certified;
  res["tail_bound"] = gs.tail_bound;
  res["verdict"] = to_string(sr.verdict);
  res["kernel_dimension"] = sr.kernel_dimension;
  res["identities"] = {{"a1_relative", id.a1_relative},   {"ubar1_sup", id.ubar1_sup},
                       {"vbar1_sup", id.vbar1_sup},       {"vbar1_slope", id.vbar1_slope},
                       {"sigma_dd_at_K", id.sigma_dd_at_K}, {"pi_dd_at_R", id.pi_dd_at_R},
                       {"factorization", id.factorization}};
  res["crosscheck"] = {{"max_error", gs.max_crosscheck_error},
                       {"max_flux_gap", gs.max_flux_gap},
                       {"precision_loss_modes", gs.precision_loss_modes}};
  rep.write_json("spectrum.json", res);
  std::printf("gamma* = %.15g (k = %d), gamma = %g: %s\n", gs.value, gs.argmax_k, sr.gamma,
              to_string(sr.verdict).c_str());
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, Reporter& rep) {
  const ModelParams p = validate(cfg.params);
  const double rs = solve_Rstar(p, cfg.tol);
  const StationaryState s = solve_Rs(p, cfg.tol);
  std::vector<double> radii = cfg.radii;
  if (radii.empty()) radii = {1.5 * rs, 2.0 * rs, s.R_s};
  VIOptions vo;
  vo.tol = cfg.vi_tol;
  vo.omega = cfg.omega;

  ordered_json studies = ordered_json::array();
  for (double R : radii) {
    const OracleStudy st = study_radial_oracle(R, p, cfg.vi_n, vo, cfg.tol);
    ordered_json levels = ordered_json::array();
    for (const OracleLevel& l : st.levels) {
      levels.push_back({{"n", l.n},
                        {"h", l.h},
                        {"sigma_error", l.sigma_error},
                        {"pi_error", number(l.pi_error)},
                        {"K_nodal", l.K_nodal},
                        {"K_volume", l.K_volume},
                        {"cell_offset", l.offset},
                        {"mean_g", l.mean_g},
                        {"boundary_flux", l.boundary_flux},
                        {"complementarity", l.complementarity},
                        {"iterations", l.iterations},
                        {"converged", l.converged}});
      const std::string t = "R = " + std::to_string(R) + ", n = " + std::to_string(l.n);
      if (!l.converged) rep.fail(t + ": PSOR did not converge");
      if (std::abs(l.K_nodal - st.K) > 2.0 * l.h) rep.fail(t + ": nodal free boundary beyond 2h");
      if (std::abs(l.K_volume - st.K) > 2.0 * l.h) rep.fail(t + ": volume free boundary beyond 2h");
    }
    if (st.sigma_order < 1.8) rep.fail("R = " + std::to_string(R) + ": sup-error order below 1.8");
    studies.push_back({{"R", R},
                       {"K", st.K},
                       {"F", st.F},
                       {"sigma_order", st.sigma_order},
                       {"F_order", number(st.F_order)},
                       {"levels", levels}});
    std::printf("R = %-10.6g K = %-10.6g order = %.3f  K_h - K = %.2e\n", R, st.K, st.sigma_order,
                st.levels.back().K_volume - st.K);
  }

  const VISolution vi = solve_radial_vi(s.R_s, p, cfg.vi_n, vo);
  if (!vi.converged) rep.fail("profile solve did not converge");
  for (const std::string& w : vi.warnings) rep.fail(w);
  const PressureSolution pr = solve_pressure(vi, p);
  std::vector<std::vector<double>> rows;
  const Vec r = vi.radii();
  for (int i = 0; i <= vi.n; ++i) {
    rows.push_back({r(i), vi.sigma(i, 0), eval_U(r(i), s.R_s, s.K_s, p).value,
                    vi.active(i, 0) ? 1.0 : 0.0, pr.pi(i), eval_V_given_K(r(i), s.R_s, s.K_s, p).value});
  }
  rep.write_csv("oracle_profile.csv", {"r", "sigma_h", "U", "active", "pi_h", "V"}, rows);

  ordered_json res;
  res["params"] = params_json(p);
  res["studies"] = studies;
  res["profile"] = {{"R", s.R_s},
                    {"n", vi.n},
                    {"omega", vi.omega},
                    {"iterations", vi.iterations},
                    {"complementarity", vi.complementarity},
                    {"K_nodal", vi.boundary_nodal(0)},
                    {"K_volume", vi.boundary_volume(0)},
                    {"mean_g", pr.mean_g},
                    {"boundary_flux", pr.boundary_flux}};
  rep.write_json("oracle.json", res);
  return kOk;
}

int cmd_mode_response(const RunConfig& cfg, Reporter& rep) {
  if (cfg.eps.empty()) throw ConfigError("eps must list at least one amplitude");
  const ModelParams p = validate(cfg.params);
  const StationaryState s = solve_Rs(p, cfg.tol);

  std::vector<std::vector<double>> rows;
  for (int k = 0; k <= cfg.zeta_k_max; ++k) {
    const ModeSolution m(k, s.K_s, s.R_s);
    rows.push_back({double(k), mode_response_zeta(m, s), m.ubar_prime_K()});
  }
  rep.write_csv("zeta.csv", {"k", "zeta", "ubar_prime_K"}, rows);

  const double h = 1e-6;
  const double fd =
      (solve_K(s.R_s + h, p, cfg.tol) - solve_K(s.R_s - h, p, cfg.tol)) / (2 * h) * s.R_s / s.K_s;
  const double zeta0 = mode_response_zeta(0, s);
  if (std::abs(zeta0 - fd) > 0.01 * std::abs(fd)) rep.fail("k = 0 gain differs from dK/dR by more than 1%");

  AxisymOptions ao;
  ao.n_r = cfg.n_r;
  ao.n_theta = cfg.n_theta;
  ao.vi.tol = cfg.axisym_tol;
  ao.vi.omega = cfg.omega;
  const VISolution ref = solve_axisym_vi(s.R_s, p, cfg.mode, 0.0, ao);
  if (!ref.converged) rep.fail("reference solve did not converge");
  const double zeta = mode_response_zeta(cfg.mode, s);

  ordered_json runs = ordered_json::array();
  std::vector<double> amplitudes;
  std::optional<VISolution> last;
  for (double eps : cfg.eps) {
    VISolution v = solve_axisym_vi(s.R_s, p, cfg.mode, eps, ao);
    if (!v.converged) rep.fail("eps = " + std::to_string(eps) + ": solve did not converge");
    for (const std::string& w : v.warnings) rep.fail("eps = " + std::to_string(eps) + ": " + w);
    const ModeMeasurement mm = measure_mode(v, ref, cfg.mode);
    amplitudes.push_back(mm.amplitude);
    ordered_json coeffs = ordered_json::array();
    for (Eigen::Index l = 0; l < mm.coefficients.size(); ++l) coeffs.push_back(mm.coefficients(l));
    runs.push_back({{"eps", eps},
                    {"amplitude", mm.amplitude},
                    {"gain", mm.amplitude / eps},
                    {"iterations", v.iterations},
                    {"omega", v.omega},
                    {"complementarity", v.complementarity},
                    {"min_sigma", v.min_sigma},
                    {"max_sigma", v.max_sigma},
                    {"coefficients", coeffs}});
    last = std::move(v);
  }

  ordered_json res;
  res["params"] = params_json(p);
  res["mode"] = cfg.mode;
  res["zeta"] = zeta;
  res["zeta0"] = zeta0;
  res["zeta0_finite_difference"] = fd;
  res["runs"] = runs;
  if (amplitudes.size() == 2) {
    const double g = richardson_gain(amplitudes[0], cfg.eps[0], amplitudes[1], cfg.eps[1]);
    res["extrapolated_gain"] = g;
    res["relative_gap"] = std::abs(g - zeta) / std::abs(zeta);
    if (std::abs(g - zeta) > 0.1 * std::abs(zeta)) rep.fail("extrapolated gain differs by more than 10%");
    std::printf("mode %d: extrapolated gain %.6g, zeta %.6g\n", cfg.mode, g, zeta);
  }
  std::printf("k = 0: zeta %.9g, finite difference %.9g\n", zeta0, fd);

  if (last) {
    rows.clear();
    for (Eigen::Index j = 0; j < last->x.size(); ++j) {
      const double theta = std::acos(last->x(j));
      const Vec r = last->radii(int(j));
      for (int i = 0; i <= last->n; ++i) rows.push_back({r(i), theta, last->sigma(i, j)});
    }
    rep.write_csv("axisym_sigma.csv", {"r", "theta", "sigma"}, rows);
  }
  rep.write_json("mode_response.json", res);
  return kOk;
}

int cmd_all(const RunConfig& cfg, Reporter& rep) {
  SuiteOptions so;
  const ModelParams p = validate(cfg.params);
  const RawParams guard{0.3, 2.0, 0.3, 1.0};
  so.parameter_sets = {cfg.params};
  if (p.sigma_hat != guard.sigma_hat || p.mu != guard.mu || p.nu != guard.nu) {
    so.parameter_sets.push_back(guard);
  }
  so.tol = cfg.tol;
  so.k_max = cfg.k_max;
  so.vi_n = cfg.vi_n;
  so.n_r = cfg.n_r;
  so.n_theta = cfg.n_theta;
  so.axisym_tol = cfg.axisym_tol;
  so.eps = cfg.eps;

  ordered_json checks = ordered_json::array();
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CheckResult c = run_criterion(id, so);
    std::printf("[%s] %d %s: %s (%.2f s)\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.detail.c_str(), c.seconds);
    std::fflush(stdout);
    ordered_json metrics;
    for (const auto& [k, v] : c.metrics) metrics[k] = number(v);
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"budget_seconds", c.budget_seconds},
                      {"metrics", metrics}});
    if (!c.passed) rep.fail(std::to_string(c.id) + " " + c.name + ": " + c.detail);
  }
  ordered_json res;
  res["checks"] = checks;
  rep.write_json("summary.json", res);
  return kOk;
}

}  // namespace
}  // namespace necrotic::cli

int main(int argc, char** argv) {
  using namespace necrotic;
  using namespace necrotic::cli;

  CLI::App app{"Necrotic tumor model: radial states, dynamics, spectrum and obstacle oracle"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value config file");
  std::map<std::string, std::string> overrides;
  for (const std::string& key : config_keys()) {
    app.add_option("--" + key, overrides[key], "config key " + key);
  }

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&, Reporter&);
  };
  const Command commands[] = {
      {"check", "validate the parameters", cmd_check},
      {"stationary", "R*, K(R), F(R), R_s and the stationary profiles", cmd_stationary},
      {"evolve", "integrate R' = R F(R)", cmd_evolve},
      {"spectrum", "mode table, gamma* and the stability verdict", cmd_spectrum},
      {"oracle", "radial obstacle solves against the closed forms", cmd_oracle},
      {"mode-response", "inner-boundary gains and the axisymmetric cross-check", cmd_mode_response},
      {"all", "full verification suite", cmd_all},
  };
  for (const Command& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    if (const char* env = std::getenv("NECROTIC_OUT_DIR"); env && *env) cfg.out_dir = env;
    for (const std::string& key : config_keys()) {
      if (app.count("--" + key) > 0) set_config_value(cfg, key, overrides[key]);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }

  for (const Command& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    Reporter rep(c.name, cfg);
    try {
      const int code = c.run(cfg, rep);
      if (code != kOk) return code;
      for (const std::string& f : rep.failures()) std::fprintf(stderr, "FAILED: %s\n", f.c_str());
      return rep.failures().empty() ? kOk : kNumerical;
    } catch (const ValidationError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kValidation;
    } catch (const DomainError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kUsage;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "numerical failure: %s\n", e.what());
      return kNumerical;
    }
  }
  return kUsage;
}
