#include "necrotic/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "necrotic/quadrature.hpp"
#include "necrotic/spectral.hpp"

namespace necrotic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int collocation_size(int k) { return 48 + k; }

double cubic_factor(int k) { return double(k) * (k - 1) * (k + 2); }

}  // namespace

ModeSolution::ModeSolution(int k, double inner, double outer) : k_(k), K_(inner), R_(outer) {
  if (k < 0) throw DomainError("ModeSolution: degree must be nonnegative");
  if (!(inner > 0.0 && inner < outer)) {
    throw DomainError("ModeSolution: requires 0 < K_s < R_s (a necrotic core)");
  }
  bK_ = log_spherical_bessel(k, K_);
  bR_ = log_spherical_bessel(k, R_);
  L_R_ = (bR_.log_i - bK_.log_i) + (bK_.log_k - bR_.log_k);
  log_em1_R_ = log_expm1(L_R_);
  log_dK_ = (k + 1) * std::log(R_ / K_) - std::log(K_) - std::log(R_) - bR_.log_k - bK_.log_i -
            log_em1_R_;
}

double ModeSolution::log_expm1_span(double r, LogSphericalBessel* at_r) const {
  *at_r = log_spherical_bessel(k_, r);
  return (at_r->log_i - bK_.log_i) + (bK_.log_k - at_r->log_k);
}

double ModeSolution::log_value(double r) const {
  LogSphericalBessel b;
  const double L = log_expm1_span(r, &b);
  if (!(L > 0.0)) return -std::numeric_limits<double>::infinity();
  return k_ * std::log(R_ / r) + b.log_k - bR_.log_k + log_expm1(L) - log_em1_R_;
}

double ModeSolution::value(double r) const {
  if (r <= K_) return 0.0;
  if (r >= R_) return 1.0;
  return std::exp(log_value(r));
}

double ModeSolution::derivative(double r) const {
  if (r <= K_) return ubar_prime_K();
  if (r >= R_) return ubar_prime_R();
  LogSphericalBessel b;
  const double L = log_expm1_span(r, &b);
  if (!(L > 0.0)) return ubar_prime_K();
  const double u = std::exp(k_ * std::log(R_ / r) + b.log_k - bR_.log_k + log_expm1(L) - log_em1_R_);
  return u * (-b.ratio_k + (b.ratio_i + b.ratio_k) / -std::expm1(-L));
}

double ModeSolution::z(double r) const {
  if (r <= K_) return 0.0;
  if (r >= R_) return 1.0;
  return std::exp(log_value(r) + (k_ + 1) * std::log(r / R_));
}

double ModeSolution::ubar_prime_K() const { return std::exp(log_dK_); }

double ModeSolution::ubar_prime_R() const {
  return (bR_.ratio_i + bR_.ratio_k * std::exp(-L_R_)) / -std::expm1(-L_R_);
}

ModeSolution solve_ubar(int k, const StationaryState& s, double tol, int crosscheck_up_to) {
  ModeSolution mode(k, s.K_s, s.R_s);
  if (k > crosscheck_up_to) return mode;

  const ChebyshevGrid grid(collocation_size(k), s.K_s, s.R_s);
  const Eigen::Index n = grid.nodes.size();
  const Vec inv_r = grid.nodes.cwiseInverse();
  Mat op = grid.diff * grid.diff;
  op += (2.0 * (k + 1) * inv_r).asDiagonal() * grid.diff;
  op -= Mat::Identity(n, n);
  Vec rhs = Vec::Zero(n);
  op.row(0).setZero();
  op(0, 0) = 1.0;
  rhs(0) = 1.0;  // u(R_s) = 1
  op.row(n - 1).setZero();
  op(n - 1, n - 1) = 1.0;  // u(K_s) = 0
  const Vec colloc = op.partialPivLu().solve(rhs);

  double err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) err = std::max(err, std::abs(colloc(i) - mode.value(grid.nodes(i))));
  mode.crosscheck_error = err;
  mode.crosschecked = true;
  mode.precision_loss = err > 1e3 * tol;
  return mode;
}

double VbarProfile::interpolate(double r) const {
  const ChebyshevGrid g(static_cast<int>(nodes.size()) - 1, nodes(nodes.size() - 1), nodes(0));
  return g.interpolate(values, r);
}

VbarProfile solve_vbar_direct(const ModeSolution& mode, const StationaryState& s, int n) {
  const int k = mode.degree();
  const ChebyshevGrid grid(n > 0 ? n : collocation_size(k), s.K_s, s.R_s);
  const Eigen::Index m = grid.nodes.size();
  Mat op = grid.diff * grid.diff;
  op += (2.0 * (k + 1) * grid.nodes.cwiseInverse()).asDiagonal() * grid.diff;
  Vec rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = mode.value(grid.nodes(i));
  const ModelParams& p = s.params;
  // v(R_s) = 0; inside the core v is regular, so v'(K-) = 0 and the jump
  // condition fixes v'(K+).
  op.row(0).setZero();
  op(0, 0) = 1.0;
  rhs(0) = 0.0;
  op.row(m - 1) = grid.diff.row(m - 1);
  rhs(m - 1) = (p.sigma_hat - p.sigma_tilde) / p.sigma_hat * mode.ubar_prime_K();
  VbarProfile out;
  out.nodes = grid.nodes;
  out.values = op.partialPivLu().solve(rhs);
  out.slope_at_R = grid.diff.row(0).dot(out.values);
  return out;
}

double solve_vbar_prime(ModeSolution& mode, const StationaryState& s, double tol) {
  const int k = mode.degree();
  const ModelParams& p = s.params;
  const double K = s.K_s, R = s.R_s;
  const double weight = 2.0 * (k + 1);
  const double jump = (p.sigma_hat - p.sigma_tilde) / p.sigma_hat;
  const double boundary_term = jump * std::exp(mode.log_ubar_prime_K() + weight * std::log(K / R));
  auto integrand = [&](double tau) {
    if (tau <= K) return 0.0;
    const double lv = mode.log_value(tau);
    return std::isfinite(lv) ? std::exp(lv + weight * std::log(tau / R)) : 0.0;
  };
  const QuadResult q = integrate(integrand, K, R, tol, tol, 4000);
  if (!q.converged) {
    throw NumericalError("solve_vbar_prime: quadrature for k = " + std::to_string(k) +
                         " stalled at error estimate " + std::to_string(q.error));
  }
  const double value = boundary_term + q.value;
  mode.vbar_prime_R = value;
  if (mode.crosschecked) mode.vbar_prime_R_direct = solve_vbar_direct(mode, s).slope_at_R;
  return value;
}

ModePieces make_pieces(const ModeSolution& mode, const StationaryState& s) {
  if (!mode.vbar_prime_R) throw DomainError("make_pieces: v_k'(R_s) not computed");
  return {mode.degree(), s.R_s, s.params.mu, s.sigma_s_prime_at_Rs, s.g_at_1, *mode.vbar_prime_R};
}

double eval_ak(int k, double gamma, const ModePieces& c) {
  return -gamma / (2.0 * c.R_s * c.R_s) * cubic_factor(k) -
         c.mu * c.R_s * c.sigma_prime_Rs * c.vbar_prime_R + c.g_at_1 * c.R_s;
}

double eval_gamma_k(int k, const ModePieces& c) {
  if (k < 2) throw DomainError("eval_gamma_k: defined for k >= 2");
  return 2.0 * c.R_s * c.R_s * c.R_s / cubic_factor(k) *
         (c.g_at_1 - c.mu * c.sigma_prime_Rs * c.vbar_prime_R);
}

double eval_ak_factored(int k, double gamma, const ModePieces& c) {
  return -cubic_factor(k) * (gamma - eval_gamma_k(k, c)) / (2.0 * c.R_s * c.R_s);
}

double mode_response_zeta(const ModeSolution& mode, const StationaryState& s) {
  const int k = mode.degree();
  const double lead = s.R_s * s.sigma_s_prime_at_Rs / (s.params.sigma_hat * s.K_s);
  return lead * std::exp(mode.log_ubar_prime_K() + k * std::log(s.K_s / s.R_s));
}

double mode_response_zeta(int k, const StationaryState& s) {
  return mode_response_zeta(ModeSolution(k, s.K_s, s.R_s), s);
}

GammaStar find_gamma_star(const StationaryState& s, const SpectrumOptions& opt) {
  if (opt.k_max < 8) throw DomainError("find_gamma_star: k_max must be at least 8");
  GammaStar gs;
  gs.value = -std::numeric_limits<double>::infinity();
  int k_max = opt.k_max;
  int next = 0;
  for (;;) {
    for (; next <= k_max; ++next) {
      ModeSolution mode = solve_ubar(next, s, opt.tol, opt.crosscheck_up_to);
      solve_vbar_prime(mode, s, opt.tol);
      if (mode.crosschecked) {
        gs.max_crosscheck_error = std::max(gs.max_crosscheck_error, mode.crosscheck_error);
        gs.max_flux_gap = std::max(gs.max_flux_gap,
                                   std::abs(*mode.vbar_prime_R_direct - *mode.vbar_prime_R));
        if (mode.precision_loss) ++gs.precision_loss_modes;
      }
      gs.pieces.push_back(make_pieces(mode, s));
      if (next >= 2) {
        const double g = eval_gamma_k(next, gs.pieces.back());
        if (g > gs.value) {
          gs.value = g;
          gs.argmax_k = next;
        }
      }
    }
    // v_k'(R_s) > 0, so gamma_k < 2 R_s^3 g(1) / (k(k-1)(k+2)) for every k.
    const int k = k_max + 1;
    gs.tail_bound = 2.0 * std::pow(s.R_s, 3) * s.g_at_1 / cubic_factor(k);
    gs.k_max_used = k_max;
    gs.certified = gs.tail_bound < gs.value;
    if (gs.certified || k_max >= opt.k_max_cap) break;
    k_max = std::min(2 * k_max, opt.k_max_cap);
  }
  return gs;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::StableModuloTranslations:
      return "stable modulo translations";
    case Verdict::Unstable:
      return "unstable";
    case Verdict::Neutral:
      return "neutral";
  }
  return "unknown";
}

Verdict classify(const GammaStar& gs, double gamma) {
  bool all_negative = true;
  for (const ModePieces& c : gs.pieces) {
    if (c.k == 1) continue;
    const double a = eval_ak(c.k, gamma, c);
    if (a > 0.0) return Verdict::Unstable;
    if (!(a < 0.0)) all_negative = false;
  }
  if (all_negative && gs.certified && gamma > gs.value) return Verdict::StableModuloTranslations;
  return Verdict::Neutral;
}

int kernel_dimension(const GammaStar& gs, double gamma, double rel_tol) {
  int dim = 0;
  for (const ModePieces& c : gs.pieces) {
    const double scale = std::abs(c.g_at_1 * c.R_s);
    if (std::abs(eval_ak(c.k, gamma, c)) <= rel_tol * scale) dim += 2 * c.k + 1;
  }
  return dim;
}

Vec apply_linearization(const Vec& coefficients, const std::vector<ModePieces>& pieces,
                        double gamma) {
  Vec out(coefficients.size());
  Eigen::Index idx = 0;
  for (const ModePieces& c : pieces) {
    const Eigen::Index width = 2 * c.k + 1;
    if (idx + width > coefficients.size()) break;
    out.segment(idx, width) = eval_ak(c.k, gamma, c) * coefficients.segment(idx, width);
    idx += width;
  }
  if (idx != coefficients.size()) {
    throw DomainError("apply_linearization: coefficient vector must hold whole degrees 0..k");
  }
  return out;
}

SpectrumReport build_spectrum_report(const StationaryState& s, double gamma,
                                     const SpectrumOptions& opt) {
  SpectrumReport rep;
  rep.params = s.params;
  rep.R_s = s.R_s;
  rep.K_s = s.K_s;
  rep.gamma = gamma;
  rep.gamma_star = find_gamma_star(s, opt);
  rep.k_max = rep.gamma_star.k_max_used;
  const int rows = std::min(opt.table_k_max, rep.k_max);
  for (int k = 0; k <= rows; ++k) {
    const ModePieces& c = rep.gamma_star.pieces[k];
    rep.rows.push_back({k, c.vbar_prime_R, k >= 2 ? eval_gamma_k(k, c) : kNaN, eval_ak(k, gamma, c)});
  }
  rep.verdict = classify(rep.gamma_star, gamma);
  rep.kernel_dimension = kernel_dimension(rep.gamma_star, gamma);

  IdentityResiduals& id = rep.identities;
  const ModePieces& c1 = rep.gamma_star.pieces[1];
  id.a1_relative = std::abs(eval_ak(1, gamma, c1)) / std::abs(s.g_at_1 * s.R_s);

  const ModelParams& p = s.params;
  const double sp = s.sigma_s_prime_at_Rs;
  ModeSolution u1 = solve_ubar(1, s, opt.tol, 1);
  solve_vbar_prime(u1, s, opt.tol);
  const VbarProfile v1 = solve_vbar_direct(u1, s);
  const int dense = 1024;
  for (int i = 0; i < dense; ++i) {
    const double r = s.K_s + (s.R_s - s.K_s) * (i + 0.5) / dense;
    const double expected = s.R_s * eval_U(r, s.R_s, s.K_s, p).d1 / (r * sp);
    id.ubar1_sup = std::max(id.ubar1_sup, std::abs(u1.value(r) - expected));
  }
  for (Eigen::Index i = 0; i < v1.nodes.size(); ++i) {
    const double r = v1.nodes(i);
    const double expected = -s.R_s * eval_V_given_K(r, s.R_s, s.K_s, p).d1 / (p.mu * r * sp);
    id.vbar1_sup = std::max(id.vbar1_sup, std::abs(v1.values(i) - expected));
  }
  id.vbar1_slope = std::abs(*u1.vbar_prime_R - s.g_at_1 / (p.mu * sp));
  id.sigma_dd_at_K = std::abs(eval_U(s.K_s, s.R_s, s.K_s, p).d2 - p.sigma_hat);
  id.pi_dd_at_R = std::abs(eval_V_given_K(s.R_s, s.R_s, s.K_s, p).d2 + s.g_at_1);
  for (const ModePieces& c : rep.gamma_star.pieces) {
    if (c.k < 2) continue;
    const double direct = eval_ak(c.k, gamma, c);
    const double factored = eval_ak_factored(c.k, gamma, c);
    const double scale = std::max({std::abs(direct), std::abs(c.g_at_1 * c.R_s), 1e-300});
    id.factorization = std::max(id.factorization, std::abs(direct - factored) / scale);
  }
  return rep;
}

}  // namespace necrotic
