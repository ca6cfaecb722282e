#pragma once

#include <optional>
#include <string>
#include <vector>

#include "necrotic/bessel.hpp"
#include "necrotic/radial.hpp"
#include "necrotic/types.hpp"

namespace necrotic {

/// Solution of the degree-k mode problem
///   u'' + (2(k+1)/r) u' = u on (K_s, R_s),  u(K_s) = 0, u(R_s) = 1,
/// evaluated through z(r) = u(r) (r/R_s)^{k+1}, which solves the modified
/// spherical Bessel equation z'' = (k(k+1)/r^2 + 1) z. All evaluation happens
/// in log space so high degrees neither underflow nor overflow.
class ModeSolution {
 public:
  ModeSolution(int k, double inner, double outer);

  int degree() const { return k_; }
  double inner() const { return K_; }
  double outer() const { return R_; }

  double value(double r) const;
  double derivative(double r) const;
  /// ln u(r) for K < r <= R.
  double log_value(double r) const;
  /// z(r) = u(r) (r/R)^{k+1}.
  double z(double r) const;

  double ubar_prime_K() const;  ///< u'(K+)
  double ubar_prime_R() const;  ///< u'(R)
  /// ln u'(K+).
  double log_ubar_prime_K() const { return log_dK_; }

  // Filled in by solve_ubar / solve_vbar_prime.
  double crosscheck_error = 0.0;  ///< sup |closed form - collocation| on the nodes
  bool crosschecked = false;
  bool precision_loss = false;
  std::optional<double> vbar_prime_R;
  std::optional<double> vbar_prime_R_direct;  ///< from the direct BVP solve
  std::optional<double> zeta_gain;

 private:
  double log_expm1_span(double r, LogSphericalBessel* at_r) const;

  int k_;
  double K_, R_;
  LogSphericalBessel bK_, bR_;
  double L_R_;        // ln[i_k(R)/i_k(K)] + ln[k_k(K)/k_k(R)]
  double log_em1_R_;  // ln(exp(L_R) - 1)
  double log_dK_;
};

struct SpectrumOptions {
  double tol = 1e-12;
  int crosscheck_up_to = 32;  ///< degrees checked against collocation
  int k_max = 256;            ///< degrees used for gamma*
  int k_max_cap = 4096;       ///< ceiling for automatic k_max growth
  int table_k_max = 64;       ///< degrees listed in the report table
};

/// Solves the degree-k mode; for k <= crosscheck_up_to also solves the BVP by
/// Chebyshev collocation and records the discrepancy (precision_loss is set
/// when it exceeds 1e3 tol).
ModeSolution solve_ubar(int k, const StationaryState& s, double tol = 1e-12,
                        int crosscheck_up_to = 32);

/// v_k'(R_s) from the flux relation, with the weighted integral by adaptive
/// quadrature. When the mode was cross-checked, also solves the jump BVP for
/// v_k directly and stores its outer slope.
double solve_vbar_prime(ModeSolution& mode, const StationaryState& s, double tol = 1e-12);

/// Direct collocation solution of the v_k problem on [K_s, R_s]: Chebyshev
/// nodes (descending from R_s) and nodal values. Used for the v_1 identity.
struct VbarProfile {
  Vec nodes;
  Vec values;
  double slope_at_R = 0.0;
  double interpolate(double r) const;
};
VbarProfile solve_vbar_direct(const ModeSolution& mode, const StationaryState& s, int n = 0);

/// Scalars entering the mode-k eigenvalue.
struct ModePieces {
  int k = 0;
  double R_s = 0.0;
  double mu = 0.0;
  double sigma_prime_Rs = 0.0;
  double g_at_1 = 0.0;
  double vbar_prime_R = 0.0;
};
ModePieces make_pieces(const ModeSolution& mode, const StationaryState& s);

/// a_k(gamma) = -gamma k(k-1)(k+2)/(2 R_s^2) - mu R_s sigma_s'(R_s) v_k'(R_s) + g(1) R_s.
double eval_ak(int k, double gamma, const ModePieces& pieces);
/// gamma_k = 2 R_s^3 [g(1) - mu sigma_s'(R_s) v_k'(R_s)] / (k(k-1)(k+2)), k >= 2.
double eval_gamma_k(int k, const ModePieces& pieces);
/// a_k via the factored form -k(k-1)(k+2)(gamma - gamma_k)/(2 R_s^2), k >= 2.
double eval_ak_factored(int k, double gamma, const ModePieces& pieces);

/// Inner-boundary response per unit outer amplitude of degree k:
///   [R_s sigma_s'(R_s) / (sigma_hat K_s)] (K_s/R_s)^k u_k'(K_s+).
double mode_response_zeta(int k, const StationaryState& s);
double mode_response_zeta(const ModeSolution& mode, const StationaryState& s);

struct GammaStar {
  double value = 0.0;
  int argmax_k = 2;
  int k_max_used = 0;
  bool certified = false;
  double tail_bound = 0.0;  ///< upper bound on gamma_k for every k > k_max_used
  double max_crosscheck_error = 0.0;  ///< closed form vs collocation, k <= crosscheck_up_to
  double max_flux_gap = 0.0;          ///< flux relation vs direct v_k solve, same degrees
  int precision_loss_modes = 0;
  std::vector<ModePieces> pieces;  ///< k = 0..k_max_used
};

/// gamma* = max_{k>=2} gamma_k. Since v_k'(R_s) > 0, gamma_k is bounded by
/// 2 R_s^3 g(1) / (k(k-1)(k+2)); k_max is doubled (up to the cap) until that
/// bound at k_max + 1 falls below the running maximum.
GammaStar find_gamma_star(const StationaryState& s, const SpectrumOptions& opt = {});

enum class Verdict { StableModuloTranslations, Unstable, Neutral };
std::string to_string(Verdict v);

struct SpectrumRow {
  int k = 0;
  double vbar_prime_R = 0.0;
  double gamma_k = 0.0;  ///< NaN for k < 2
  double a_k = 0.0;
};

struct IdentityResiduals {
  double a1_relative = 0.0;         ///< |a_1| / |g(1) R_s|
  double ubar1_sup = 0.0;           ///< u_1 vs R_s sigma_s'(r)/(r sigma_s'(R_s))
  double vbar1_sup = 0.0;           ///< v_1 vs -R_s pi_s'(r)/(mu r sigma_s'(R_s))
  double vbar1_slope = 0.0;         ///< v_1'(R_s) vs g(1)/(mu sigma_s'(R_s))
  double sigma_dd_at_K = 0.0;       ///< |sigma_s''(K_s+) - sigma_hat|
  double pi_dd_at_R = 0.0;          ///< |pi_s''(R_s) + g(1)|
  double factorization = 0.0;       ///< max relative gap between the two a_k forms
};

struct SpectrumReport {
  ModelParams params;
  double R_s = 0.0;
  double K_s = 0.0;
  double gamma = 0.0;
  int k_max = 0;
  std::vector<SpectrumRow> rows;  ///< k = 0..table_k_max
  GammaStar gamma_star;
  Verdict verdict = Verdict::Neutral;
  int kernel_dimension = 0;
  IdentityResiduals identities;
};

SpectrumReport build_spectrum_report(const StationaryState& s, double gamma,
                                     const SpectrumOptions& opt = {});

/// Verdict for a given gamma from the eigenvalue table (k = 0..k_max); the
/// tail beyond k_max is covered by the gamma* certificate.
Verdict classify(const GammaStar& gs, double gamma);
int kernel_dimension(const GammaStar& gs, double gamma, double rel_tol = 1e-8);

/// Multiplier form of the linearized flow: coefficients ordered by degree,
/// index k^2 + l for l = 0..2k, each scaled by a_k(gamma).
Vec apply_linearization(const Vec& coefficients, const std::vector<ModePieces>& pieces,
                        double gamma);

}  // namespace necrotic
