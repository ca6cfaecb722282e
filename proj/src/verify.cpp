#include "necrotic/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "necrotic/dynamics.hpp"
#include "necrotic/quadrature.hpp"
#include "necrotic/radial.hpp"
#include "necrotic/spectrum.hpp"

namespace necrotic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Recorder {
 public:
  explicit Recorder(CheckResult& r) : r_(r) {}

  void require(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
    if (!ok) ++failures_;
  }
  void metric(const std::string& name, double value) { r_.metrics.emplace_back(name, value); }
  void finish(const std::string& summary) {
    r_.passed = failures_ == 0;
    std::ostringstream os;
    if (failures_ == 0) {
      os << summary << " (" << checks_ << " checks)";
    } else {
      os << failures_ << " of " << checks_ << " checks failed; first: " << first_failure_;
    }
    r_.detail = os.str();
  }

 private:
  CheckResult& r_;
  int checks_ = 0;
  int failures_ = 0;
  std::string first_failure_;
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string label(int set) { return "set" + std::to_string(set + 1); }
std::string tag(int set) { return label(set) + "."; }

void criterion_thresholds(const SuiteOptions& opt, Recorder& rec) {
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);
    double a[2];
    for (int k = 0; k < 2; ++k) {
      ModeSolution m = solve_ubar(k, s, opt.tol, -1);
      solve_vbar_prime(m, s, opt.tol);
      a[k] = eval_ak(k, p.gamma, make_pieces(m, s));
    }
    const double scale = std::abs(s.g_at_1 * s.R_s);
    rec.metric(tag(i) + "a0", a[0]);
    rec.metric(tag(i) + "a1_relative", std::abs(a[1]) / scale);
    rec.require(std::abs(a[1]) <= 1e-8 * scale, label(i) + " |a1| = " + num(std::abs(a[1])));
    rec.require(a[0] < 0.0, label(i) + " a0 = " + num(a[0]));
  }
}

void criterion_mode_identity(const SuiteOptions& opt, Recorder& rec) {
  SpectrumOptions so;
  so.tol = opt.tol;
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);
    ModeSolution u1 = solve_ubar(1, s, opt.tol, 1);
    solve_vbar_prime(u1, s, opt.tol);
    const VbarProfile v1 = solve_vbar_direct(u1, s);
    double ue = 0.0, ve = 0.0;
    const int pts = 1024;
    for (int m = 0; m < pts; ++m) {
      const double r = s.K_s + (s.R_s - s.K_s) * m / (pts - 1.0);
      const double expect = s.R_s * eval_U(r, s.R_s, s.K_s, p).d1 / (r * s.sigma_s_prime_at_Rs);
      ue = std::max(ue, std::abs(u1.value(r) - expect));
    }
    for (Eigen::Index m = 0; m < v1.nodes.size(); ++m) {
      const double r = v1.nodes(m);
      const double expect =
          -s.R_s * eval_V_given_K(r, s.R_s, s.K_s, p).d1 / (p.mu * r * s.sigma_s_prime_at_Rs);
      ve = std::max(ve, std::abs(v1.values(m) - expect));
    }
    // Off the collocation nodes, through the barycentric interpolant.
    for (int m = 0; m < pts; ++m) {
      const double r = s.K_s + (s.R_s - s.K_s) * (m + 0.5) / pts;
      const double expect =
          -s.R_s * eval_V_given_K(r, s.R_s, s.K_s, p).d1 / (p.mu * r * s.sigma_s_prime_at_Rs);
      ve = std::max(ve, std::abs(v1.interpolate(r) - expect));
    }
    const double slope = std::abs(*u1.vbar_prime_R - s.g_at_1 / (p.mu * s.sigma_s_prime_at_Rs));
    rec.metric(tag(i) + "ubar1_sup", ue);
    rec.metric(tag(i) + "vbar1_sup", ve);
    rec.metric(tag(i) + "vbar1_slope", slope);
    rec.require(ue <= 1e-9, label(i) + " ubar1 sup error " + num(ue));
    rec.require(ve <= 1e-9, label(i) + " vbar1 sup error " + num(ve));
    rec.require(slope <= 1e-9, label(i) + " vbar1'(R_s) error " + num(slope));
  }
}

void criterion_asymptotics(const SuiteOptions& opt, Recorder& rec) {
  SpectrumOptions so;
  so.tol = opt.tol;
  so.k_max = std::max(opt.k_max, 256);
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);
    const GammaStar gs = find_gamma_star(s, so);
    double sum = 0.0;
    int count = 0;
    for (int k = 128; k <= 256; ++k) {
      sum += eval_gamma_k(k, gs.pieces[k]) * k * k * k / (2.0 * std::pow(s.R_s, 3) * s.g_at_1);
      ++count;
    }
    const double mean = sum / count;
    rec.metric(tag(i) + "mean_ratio", mean);
    rec.require(std::abs(mean - 1.0) <= 0.05, label(i) + " mean ratio " + num(mean));
  }
}

void criterion_structure(const SuiteOptions& opt, Recorder& rec) {
  SpectrumOptions so;
  so.tol = opt.tol;
  so.k_max = opt.k_max;
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);
    const GammaStar gs = find_gamma_star(s, so);
    rec.metric(tag(i) + "gamma_star", gs.value);
    rec.metric(tag(i) + "argmax_k", gs.argmax_k);
    rec.require(gs.certified, label(i) + " gamma* tail not certified");
    const double stable = 2.0 * gs.value, unstable = 0.5 * gs.value;
    int positive_at_stable = 0;
    for (const ModePieces& c : gs.pieces) {
      if (c.k != 1 && !(eval_ak(c.k, stable, c) < 0.0)) ++positive_at_stable;
    }
    rec.require(positive_at_stable == 0,
                label(i) + " " + std::to_string(positive_at_stable) + " modes with a_k >= 0 at 2 gamma*");
    const int dim = kernel_dimension(gs, stable);
    rec.metric(tag(i) + "kernel_dimension", dim);
    rec.require(dim == 3, label(i) + " kernel dimension " + std::to_string(dim));
    rec.require(classify(gs, stable) == Verdict::StableModuloTranslations,
                label(i) + " verdict at 2 gamma* is " + to_string(classify(gs, stable)));
    int positive = 0;
    for (const ModePieces& c : gs.pieces) {
      if (c.k >= 2 && eval_ak(c.k, unstable, c) > 0.0) ++positive;
    }
    rec.metric(tag(i) + "unstable_modes_at_half", positive);
    rec.require(positive > 0, label(i) + " no growing mode at gamma*/2");
    rec.require(classify(gs, unstable) == Verdict::Unstable, label(i) + " verdict at gamma*/2");
  }
}

void criterion_radial_oracle(const SuiteOptions& opt, Recorder& rec) {
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const double rs = solve_Rstar(p, opt.tol);
    const StationaryState s = solve_Rs(p, opt.tol);
    const double radii[] = {1.5 * rs, 2.0 * rs, s.R_s};
    const char* names[] = {"1.5Rstar", "2Rstar", "Rs"};
    for (int j = 0; j < 3; ++j) {
      const OracleStudy st = study_radial_oracle(radii[j], p, opt.vi_n, {}, opt.tol);
      const std::string t = tag(i) + names[j];
      rec.metric(t + ".sigma_order", st.sigma_order);
      rec.require(st.sigma_order >= 1.8, t + " sup-error order " + num(st.sigma_order));
      for (const OracleLevel& l : st.levels) {
        const std::string lt = t + " n=" + std::to_string(l.n);
        rec.require(l.converged, lt + " PSOR did not converge");
        rec.require(std::abs(l.K_nodal - st.K) <= 2.0 * l.h, lt + " nodal free boundary off by " +
                                                                 num(std::abs(l.K_nodal - st.K)));
        rec.require(std::abs(l.K_volume - st.K) <= 2.0 * l.h,
                    lt + " volume free boundary off by " + num(std::abs(l.K_volume - st.K)));
      }
      rec.metric(t + ".K_nodal_error_fine", st.levels.back().K_nodal - st.K);
      rec.metric(t + ".K_volume_error_fine", st.levels.back().K_volume - st.K);
    }
  }
}

void criterion_F(const SuiteOptions& opt, Recorder& rec) {
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const double rs = solve_Rstar(p, opt.tol);
    const StationaryState s = solve_Rs(p, opt.tol);

    double quad_gap = 0.0;
    for (double R : {0.05, 0.5, 0.9 * rs, rs, 1.1 * rs, 4.0, s.R_s, 20.0, 50.0}) {
      quad_gap = std::max(quad_gap, std::abs(eval_F(R, p, opt.tol) - quadrature_F(R, p, opt.tol)));
    }
    rec.metric(tag(i) + "quadrature_gap", quad_gap);
    rec.require(quad_gap <= 1e-8, label(i) + " closed form vs quadrature " + num(quad_gap));

    for (double R : {1.5 * rs, s.R_s}) {
      const OracleStudy st = study_radial_oracle(R, p, opt.vi_n, {}, opt.tol);
      const double e0 = std::abs(st.levels.front().mean_g - st.F);
      const double e2 = std::abs(st.levels.back().mean_g - st.F);
      rec.metric(tag(i) + "F_h_error_fine", e2);
      rec.metric(tag(i) + "F_h_order", st.F_order);
      rec.require(st.F_order >= 1.8, label(i) + " discrete average order " + num(st.F_order));
      // C h^2 with C fixed by the coarsest level, 10% headroom for the
      // second-order remainder.
      rec.require(e2 <= 1.1 * e0 / 16.0 + 1e-12, label(i) + " discrete average not O(h^2)");
      if (R == s.R_s) {
        const double h = st.levels.back().h;
        const double flux = std::abs(st.levels.back().boundary_flux);
        rec.metric(tag(i) + "pressure_flux_at_Rs", flux);
        rec.require(flux <= 10.0 * h * h, label(i) + " pressure flux at R_s " + num(flux));
      }
    }

    const int pts = 64;
    double prev = std::numeric_limits<double>::infinity();
    int reversals = 0;
    for (int m = 0; m < pts; ++m) {
      const double R = std::exp(std::log(1e-2) + (std::log(50.0) - std::log(1e-2)) * m / (pts - 1));
      const double F = eval_F(R, p, opt.tol);
      if (!(F < prev)) ++reversals;
      prev = F;
    }
    rec.require(reversals == 0, label(i) + " F not decreasing at " + std::to_string(reversals) + " points");
    const double lo = eval_F(1e-2, p, opt.tol), lo_limit = p.mu * (1.0 - p.sigma_hat) / 3.0;
    const double hi = eval_F(50.0, p, opt.tol), hi_limit = -p.nu / 3.0;
    rec.metric(tag(i) + "F_small_relative_gap", std::abs(lo - lo_limit) / lo_limit);
    rec.metric(tag(i) + "F_large_gap", std::abs(hi - hi_limit));
    rec.require(std::abs(lo - lo_limit) <= 1e-3 * lo_limit, label(i) + " small-R limit " + num(lo));
    rec.require(std::abs(hi - hi_limit) <= 1e-3, label(i) + " large-R limit " + num(hi));
  }
}

void criterion_dynamics(const SuiteOptions& opt, Recorder& rec) {
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);
    for (double factor : {0.5, 2.0}) {
      const double R0 = factor * s.R_s;
      const Trajectory tr = integrate(R0, 200.0, p);
      const double sign = factor < 1.0 ? 1.0 : -1.0;
      int reversals = 0;
      for (Eigen::Index m = 1; m < tr.radii.size(); ++m) {
        if (sign * (tr.radii(m) - tr.radii(m - 1)) < 0.0) ++reversals;
      }
      const double gap = std::abs(tr.radii(tr.radii.size() - 1) - s.R_s);
      const std::string t = tag(i) + (factor < 1.0 ? "from_half" : "from_double");
      rec.metric(t + ".final_gap", gap);
      rec.require(reversals == 0, t + " not monotone");
      rec.require(gap < 1e-6, t + " |R(200) - R_s| = " + num(gap));
      if (factor < 1.0) {
        rec.require(tr.radii.maxCoeff() <= s.R_s + 1e-9, t + " overshoots R_s");
      }
    }
    const double rs = solve_Rstar(p, opt.tol);
    const Trajectory early = integrate(0.5 * rs, 200.0, p);
    rec.require(early.onset_time.has_value(), label(i) + " no core onset from R*/2");
    if (early.onset_time) rec.metric(tag(i) + "onset_time", *early.onset_time);
  }
}

void criterion_mode_properties(const SuiteOptions& opt, Recorder& rec) {
  const double slack = 1e-10;
  const int pts = 1024, kmax = 16;
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);
    std::vector<double> r(pts);
    for (int m = 0; m < pts; ++m) r[m] = s.K_s + (s.R_s - s.K_s) * m / (pts - 1.0);
    std::vector<Mat> tab;  // per k: value, derivative, z on the grid
    std::vector<ModeSolution> modes;
    for (int k = 0; k <= kmax; ++k) {
      modes.emplace_back(k, s.K_s, s.R_s);
      Mat t(pts, 3);
      for (int m = 0; m < pts; ++m) {
        t(m, 0) = modes[k].value(r[m]);
        t(m, 1) = modes[k].derivative(r[m]);
        t(m, 2) = modes[k].z(r[m]);
      }
      tab.push_back(std::move(t));
    }
    long violations = 0;
    for (int k = 0; k <= kmax; ++k) {
      const Mat& t = tab[k];
      if (std::abs(t(0, 0)) > slack || std::abs(t(pts - 1, 0) - 1.0) > slack) ++violations;
      for (int m = 1; m + 1 < pts; ++m) {
        if (!(t(m, 0) > -slack && t(m, 0) < 1.0 + slack)) ++violations;
      }
      for (int m = 0; m < pts; ++m) {
        if (!(t(m, 1) > -slack)) ++violations;
      }
      for (int l = 0; l < k; ++l) {
        const Mat& u = tab[l];
        for (int m = 1; m + 1 < pts; ++m) {
          if (t(m, 0) < u(m, 0) - slack) ++violations;  // u_k > u_l
          if (t(m, 2) > u(m, 2) + slack) ++violations;  // z_k < z_l
        }
        if (modes[k].ubar_prime_K() < modes[l].ubar_prime_K() - slack) ++violations;
        if (modes[k].ubar_prime_R() > modes[l].ubar_prime_R() + slack) ++violations;
      }
    }
    rec.metric(tag(i) + "violations", double(violations));
    rec.require(violations == 0, label(i) + " " + std::to_string(violations) + " violations");
  }
}

void criterion_mode_response(const SuiteOptions& opt, Recorder& rec) {
  if (opt.eps.size() != 2) throw DomainError("mode-response check needs exactly two amplitudes");
  AxisymOptions ao;
  ao.n_r = opt.n_r;
  ao.n_theta = opt.n_theta;
  ao.vi.tol = opt.axisym_tol;
  for (std::size_t i = 0; i < opt.parameter_sets.size(); ++i) {
    const ModelParams p = validate(opt.parameter_sets[i]);
    const StationaryState s = solve_Rs(p, opt.tol);

    const VISolution ref = solve_axisym_vi(s.R_s, p, 2, 0.0, ao);
    double c[2];
    for (int e = 0; e < 2; ++e) {
      const VISolution v = solve_axisym_vi(s.R_s, p, 2, opt.eps[e], ao);
      rec.require(v.converged, label(i) + " axisymmetric solve did not converge");
      c[e] = measure_mode(v, ref, 2).amplitude;
    }
    const double measured = richardson_gain(c[0], opt.eps[0], c[1], opt.eps[1]);
    const double zeta2 = mode_response_zeta(2, s);
    rec.metric(tag(i) + "zeta2_measured", measured);
    rec.metric(tag(i) + "zeta2", zeta2);
    rec.require(std::abs(measured - zeta2) <= 0.1 * std::abs(zeta2),
                label(i) + " measured gain " + num(measured) + " vs " + num(zeta2));

    const double h = 1e-6;
    const double fd = (solve_K(s.R_s + h, p, opt.tol) - solve_K(s.R_s - h, p, opt.tol)) / (2 * h) *
                      s.R_s / s.K_s;
    const double zeta0 = mode_response_zeta(0, s);
    rec.metric(tag(i) + "zeta0", zeta0);
    rec.metric(tag(i) + "zeta0_fd", fd);
    rec.require(std::abs(zeta0 - fd) <= 0.01 * std::abs(fd),
                label(i) + " k = 0 gain " + num(zeta0) + " vs finite difference " + num(fd));
  }
}

struct Criterion {
  const char* name;
  double budget;
  void (*body)(const SuiteOptions&, Recorder&);
  const char* summary;
};

const Criterion kCriteria[kCriterionCount] = {
    {"threshold identities", 1.0, criterion_thresholds, "a1 vanishes and a0 < 0"},
    {"closed-form mode identity", 1.0, criterion_mode_identity, "u1 and v1 match the profiles"},
    {"gamma_k asymptotics", 10.0, criterion_asymptotics, "gamma_k k^3 / (2 R^3 g(1)) near 1"},
    {"spectrum structure", 5.0, criterion_structure, "stable at 2 gamma*, unstable at gamma*/2"},
    {"radial oracle equivalence", 60.0, criterion_radial_oracle, "second order, boundary within 2h"},
    {"F consistency", 30.0, criterion_F, "closed form, quadrature and grid average agree"},
    {"radius dynamics", 5.0, criterion_dynamics, "monotone convergence to R_s"},
    {"mode property suite", 10.0, criterion_mode_properties, "orderings hold on 1024 points"},
    {"linearized boundary response", 180.0, criterion_mode_response, "oracle matches zeta"},
};

}  // namespace

double quadrature_F(double R, const ModelParams& p, double tol) {
  const double K = solve_K(R, p, tol);
  auto living = [&](double r) { return (eval_U(r, R, K, p).value - p.sigma_hat) * r * r; };
  const QuadResult q = integrate(living, K, R, 1e-3 * tol * R * R * R, 1e-14, 4000);
  if (!q.converged) throw NumericalError("quadrature_F: no convergence");
  return (p.mu * q.value - p.nu * K * K * K / 3.0) / (R * R * R);
}

OracleStudy study_radial_oracle(double R, const ModelParams& p, int n_lo, const VIOptions& vo,
                                double tol) {
  OracleStudy st;
  st.R = R;
  st.K = solve_K(R, p, tol);
  st.F = eval_F(R, p, tol);
  int base = n_lo;
  const VISolution coarse = solve_radial_vi(R, p, n_lo, vo);
  const double Kh = coarse.boundary_volume(0);
  if (Kh > 0.0) {
    double best = 1.0;
    for (int n = n_lo; n <= n_lo + n_lo / 4; ++n) {
      const double t = Kh * n / R;
      const double d = std::abs(t - std::round(t));
      if (d < best) {
        best = d;
        base = n;
      }
    }
  }
  for (int level = 0; level < 3; ++level) {
    const int n = base << level;
    const VISolution vi = solve_radial_vi(R, p, n, vo);
    OracleLevel l;
    l.n = n;
    l.h = vi.grid_spacing();
    l.iterations = vi.iterations;
    l.converged = vi.converged;
    l.complementarity = vi.complementarity;
    l.K_nodal = vi.boundary_nodal(0);
    l.K_volume = vi.boundary_volume(0);
    l.offset = l.K_volume / l.h - std::floor(l.K_volume / l.h);
    const Vec r = vi.radii();
    const bool core = st.K > 0.0;
    l.pi_error = core ? 0.0 : kNaN;
    const PressureSolution pr = solve_pressure(vi, p);
    for (int i = 0; i <= n; ++i) {
      l.sigma_error = std::max(l.sigma_error, std::abs(vi.sigma(i, 0) - eval_U(r(i), R, st.K, p).value));
      if (core) {
        l.pi_error = std::max(l.pi_error, std::abs(pr.pi(i) - eval_V_given_K(r(i), R, st.K, p).value));
      }
    }
    l.mean_g = pr.mean_g;
    l.boundary_flux = pr.boundary_flux;
    st.levels.push_back(l);
  }
  const OracleLevel &a = st.levels.front(), &c = st.levels.back();
  st.sigma_order = std::log2(a.sigma_error / c.sigma_error) / 2.0;
  st.F_order = std::log2(std::abs(a.mean_g - st.F) / std::abs(c.mean_g - st.F)) / 2.0;
  return st;
}

CheckResult run_criterion(int id, const SuiteOptions& opt) {
  if (id < 1 || id > kCriterionCount) throw DomainError("run_criterion: id out of range");
  const Criterion& c = kCriteria[id - 1];
  CheckResult res;
  res.id = id;
  res.name = c.name;
  res.budget_seconds = c.budget;
  Recorder rec(res);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.body(opt, rec);
  } catch (const std::exception& e) {
    rec.require(false, std::string("exception: ") + e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (opt.enforce_budgets) {
    rec.require(res.seconds < c.budget, "runtime " + num(res.seconds) + " s over budget");
  }
  rec.finish(c.summary);
  return res;
}

std::vector<CheckResult> run_acceptance(const SuiteOptions& opt) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

}  // namespace necrotic
