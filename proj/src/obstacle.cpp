#include "necrotic/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>

#include "necrotic/spectral.hpp"

namespace necrotic {

namespace {

// Linear form sum_k coef_k x_{idx_k} + constant, with Dirichlet nodes folded
// into the constant.
struct LinearForm {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
  void add(int idx, double coef, double dirichlet_value = 1.0) {
    if (idx < 0) {
      constant += coef * dirichlet_value;
    } else {
      terms.emplace_back(idx, coef);
    }
  }
};

class QuadraticAssembler {
 public:
  explicit QuadraticAssembler(int unknowns) : rhs_(Vec::Zero(unknowns)), size_(unknowns) {}

  // Adds weight/2 (a.x + c)^2 to the energy.
  void add(const LinearForm& f, double weight) {
    for (const auto& [i, ci] : f.terms) {
      for (const auto& [j, cj] : f.terms) triplets_.emplace_back(i, j, weight * ci * cj);
      rhs_(i) -= weight * f.constant * ci;
    }
  }
  void add_diagonal(int i, double weight) {
    if (i >= 0) triplets_.emplace_back(i, i, weight);
  }

  SparseRowMat matrix() const {
    SparseRowMat A(size_, size_);
    A.setFromTriplets(triplets_.begin(), triplets_.end());
    return A;
  }
  const Vec& rhs() const { return rhs_; }

 private:
  std::vector<Eigen::Triplet<double>> triplets_;
  Vec rhs_;
  int size_;
};

struct Discretization {
  int n = 0;
  int columns = 0;
  Vec s, x, w, b;
  Vec cell_volume;  // scaled-coordinate volumes (s^3 measure / 3), n + 1 entries
  SparseRowMat A;
  Vec rhs;

  int unknowns() const { return 1 + (n - 1) * columns; }
  int index(int i, int j) const {
    if (i == 0) return 0;
    if (i == n) return -1;
    return 1 + (i - 1) * columns + j;
  }
};

Vec cell_volumes(int n) {
  const double h = 1.0 / n;
  Vec v(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double lo = std::max(0.0, (i - 0.5) * h);
    const double hi = std::min(1.0, (i + 0.5) * h);
    v(i) = (hi * hi * hi - lo * lo * lo) / 3.0;
  }
  return v;
}

// Energy 1/2 int (|grad sigma|^2 + sigma^2) dV over r < b(x), written in
// (s, x) with r = s b(x) and discretized column by column; angular
// differences couple neighbouring Gauss columns.
Discretization discretize(double R, int k, double eps, int n, int columns) {
  Discretization d;
  d.n = n;
  d.columns = columns;
  const double h = 1.0 / n;
  d.s = Vec::LinSpaced(n + 1, 0.0, 1.0);
  const GaussLegendre gl(columns);
  d.x = gl.nodes;
  d.w = gl.weights;
  d.b.resize(columns);
  for (int j = 0; j < columns; ++j) d.b(j) = R * (1.0 + eps * legendre(k, d.x(j)));
  d.cell_volume = cell_volumes(n);

  QuadraticAssembler q(d.unknowns());
  for (int j = 0; j < columns; ++j) {
    for (int i = 0; i < n; ++i) {
      const double sm = (i + 0.5) * h;
      LinearForm f;
      f.add(d.index(i + 1, j), 1.0);
      f.add(d.index(i, j), -1.0);
      q.add(f, d.w(j) * d.b(j) * sm * sm / h);
    }
    for (int i = 0; i < n; ++i) {
      q.add_diagonal(d.index(i, j), d.w(j) * std::pow(d.b(j), 3) * d.cell_volume(i));
    }
  }

  // Radial central difference at (i, j), one-sided second order at s = 1.
  auto radial_difference = [&](LinearForm& f, int i, int j, double scale) {
    if (i < n) {
      f.add(d.index(i + 1, j), scale / (2 * h));
      f.add(d.index(i - 1, j), -scale / (2 * h));
    } else {
      f.add(d.index(n, j), 1.5 * scale / h);
      f.add(d.index(n - 1, j), -2.0 * scale / h);
      f.add(d.index(n - 2, j), 0.5 * scale / h);
    }
  };
  for (int j = 0; j + 1 < columns; ++j) {
    const double xf = 0.5 * (d.x(j) + d.x(j + 1));
    const double dx = d.x(j + 1) - d.x(j);
    const auto [pk, dpk] = legendre_with_derivative(k, xf);
    const double bf = R * (1.0 + eps * pk);
    const double log_slope = eps * dpk / (1.0 + eps * pk);
    for (int i = 1; i <= n; ++i) {
      const double qi = i == n ? 0.5 * h : h;
      LinearForm f;
      f.add(d.index(i, j + 1), 1.0 / dx);
      f.add(d.index(i, j), -1.0 / dx);
      if (log_slope != 0.0) {
        const double c = -d.s(i) * log_slope * 0.5;
        radial_difference(f, i, j, c);
        radial_difference(f, i, j + 1, c);
      }
      q.add(f, qi * (1.0 - xf * xf) * bf * dx);
    }
  }
  d.A = q.matrix();
  d.rhs = q.rhs();
  return d;
}

double relaxation_from_radius(double rho) {
  rho = std::clamp(rho, 0.0, 1.0 - 1e-12);
  return std::clamp(2.0 / (1.0 + std::sqrt(1.0 - rho * rho)), 1.0, 1.99);
}

VISolution package(const Discretization& d, double R, const ModelParams& p, const PsorResult& res,
                   bool axisymmetric) {
  VISolution out;
  out.axisymmetric = axisymmetric;
  out.R = R;
  out.n = d.n;
  out.s = d.s;
  out.x = d.x;
  out.weights = d.w;
  out.column_radius = d.b;
  out.iterations = res.sweeps;
  out.last_update = res.last_update;
  out.omega = res.omega;
  out.converged = res.converged;

  const int n = d.n, m = d.columns;
  const Vec resid = d.A * res.x - d.rhs;
  out.sigma.resize(n + 1, m);
  out.multiplier = Mat::Zero(n + 1, m);
  out.active.resize(n + 1, m);
  const double sh = p.sigma_hat;
  double center_mass_weight = 0.0;
  for (int j = 0; j < m; ++j) center_mass_weight += d.w(j) * std::pow(d.b(j), 3);

  out.complementarity = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < m; ++j) {
      const int idx = d.index(i, j);
      const double v = idx < 0 ? 1.0 : res.x(idx);
      out.sigma(i, j) = v;
      out.active(i, j) = idx >= 0 && v <= sh;
      if (out.active(i, j)) out.multiplier(i, j) = idx == 0 ? resid(0) / m : resid(idx);
    }
  }
  for (int idx = 0; idx < d.unknowns(); ++idx) {
    double volume;
    if (idx == 0) {
      volume = d.cell_volume(0) * center_mass_weight;
    } else {
      const int i = 1 + (idx - 1) / m, j = (idx - 1) % m;
      volume = d.cell_volume(i) * d.w(j) * std::pow(d.b(j), 3);
    }
    const double c = std::min(res.x(idx) - sh, resid(idx) / volume);
    out.complementarity = std::max(out.complementarity, std::abs(c));
  }
  out.min_sigma = out.sigma.minCoeff();
  out.max_sigma = out.sigma.maxCoeff();

  out.boundary_nodal = Vec::Zero(m);
  out.boundary_volume = Vec::Zero(m);
  for (int j = 0; j < m; ++j) {
    int last = -1;
    while (last + 1 <= n && out.active(last + 1, j)) ++last;
    for (int i = last + 2; i <= n; ++i) {
      if (out.active(i, j)) {
        out.warnings.push_back("active set not radially connected in column " + std::to_string(j));
        break;
      }
    }
    if (last >= n - 1) {
      out.warnings.push_back("active set touches the outer boundary in column " + std::to_string(j));
    }
    double mass = resid(0) * d.w(j) * std::pow(d.b(j), 3) / center_mass_weight;
    if (!out.active(0, j)) mass = 0.0;
    for (int i = 1; i < n; ++i) mass += out.multiplier(i, j);
    out.boundary_volume(j) = std::cbrt(3.0 * std::max(mass, 0.0) / (sh * d.w(j)));

    if (last < 0) continue;
    const int a = last + 1;
    if (a >= n) {
      out.boundary_nodal(j) = d.b(j);
      continue;
    }
    // sigma - sigma_hat grows quadratically off the core, so its square root
    // is close to linear there.
    const double r1 = d.s(a), d1 = std::sqrt(std::max(out.sigma(a, j) - sh, 0.0));
    const double r2 = d.s(a + 1), d2 = std::sqrt(std::max(out.sigma(a + 1, j) - sh, 0.0));
    double est = d2 > d1 ? r1 - d1 * (r2 - r1) / (d2 - d1) : r1;
    est = std::clamp(est, d.s(last), r1);
    out.boundary_nodal(j) = est * d.b(j);
  }
  return out;
}

Vec smooth_guess(const Discretization& d) {
  Vec g(d.unknowns());
  for (int idx = 0; idx < d.unknowns(); ++idx) {
    const int i = idx == 0 ? 0 : 1 + (idx - 1) / d.columns;
    const double t = std::numbers::pi * d.s(i);
    g(idx) = i == 0 ? 1.0 : std::sin(t) / t;
  }
  return g;
}

}  // namespace

double jacobi_radius(const SparseRowMat& A, Vec v, int iterations) {
  const Vec diag = A.diagonal();
  double rho = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vec Jv = v - (A * v).cwiseQuotient(diag);
    // Rayleigh quotient in the D inner product, where J is self-adjoint.
    rho = v.dot(diag.cwiseProduct(Jv)) / v.dot(diag.cwiseProduct(v));
    const double norm = Jv.norm();
    if (!(norm > 0.0)) break;
    v = Jv / norm;
  }
  return rho;
}

PsorResult projected_sor(const SparseRowMat& A, const Vec& b, double lower, Vec x0,
                         const VIOptions& opt) {
  const Eigen::Index n = A.rows();
  if (b.size() != n || x0.size() != n) throw DomainError("projected_sor: size mismatch");
  PsorResult res;
  res.omega = opt.omega > 0.0 ? opt.omega : relaxation_from_radius(jacobi_radius(A, Vec::Ones(n)));
  if (!(res.omega > 0.0 && res.omega < 2.0)) throw DomainError("projected_sor: omega must lie in (0, 2)");
  const long cap = opt.max_sweeps > 0 ? opt.max_sweeps : 50L * n;

  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const double* val = A.valuePtr();
  const Vec diag = A.diagonal();
  Vec& x = x0;
  x = x.cwiseMax(lower);
  const double w = res.omega;

  auto relax = [&](Eigen::Index i) {
    double sum = b(i);
    for (int p = outer[i]; p < outer[i + 1]; ++p) {
      if (inner[p] != i) sum -= val[p] * x(inner[p]);
    }
    const double next = std::max(lower, x(i) + w * (sum / diag(i) - x(i)));
    const double change = std::abs(next - x(i));
    x(i) = next;
    return change;
  };

  for (res.sweeps = 1; res.sweeps <= cap; ++res.sweeps) {
    double largest = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) largest = std::max(largest, relax(i));
    for (Eigen::Index i = n - 1; i >= 0; --i) largest = std::max(largest, relax(i));
    res.last_update = largest;
    if (largest < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.sweeps = std::min(res.sweeps, cap);
  res.x = std::move(x);
  return res;
}

VISolution solve_radial_vi(double R, const ModelParams& p, int n, const VIOptions& opt) {
  if (!(R > 0.0)) throw DomainError("solve_radial_vi: R must be positive");
  if (n < 64) throw DomainError("solve_radial_vi: need at least 64 intervals");
  const Discretization d = discretize(R, 0, 0.0, n, 1);
  VIOptions o = opt;
  if (o.omega <= 0.0) o.omega = relaxation_from_radius(jacobi_radius(d.A, smooth_guess(d)));
  const PsorResult res = projected_sor(d.A, d.rhs, p.sigma_hat, Vec::Ones(d.unknowns()), o);
  return package(d, R, p, res, false);
}

PressureSolution solve_pressure(const VISolution& vi, const ModelParams& p) {
  if (vi.axisymmetric) throw DomainError("solve_pressure: radial solutions only");
  if (!vi.converged) throw DomainError("solve_pressure: obstacle solve did not converge");
  const int n = vi.n;
  const double R = vi.R, h = R / n;
  const Vec vol = cell_volumes(n) * (R * R * R);
  const double mass_scale = vi.weights(0) * p.sigma_hat;

  PressureSolution out;
  out.r = vi.s * R;
  out.source.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double living = std::max(vi.sigma(i, 0) - p.sigma_hat, 0.0);
    out.source(i) = p.mu * vol(i) * living - p.nu * vi.multiplier(i, 0) / mass_scale;
  }

  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    const double rf = (i + 0.5) * h;
    const double wf = rf * rf / h;
    t.emplace_back(i, i, wf);
    if (i + 1 < n) {
      t.emplace_back(i + 1, i + 1, wf);
      t.emplace_back(i, i + 1, -wf);
      t.emplace_back(i + 1, i, -wf);
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
  if (ldlt.info() != Eigen::Success) throw NumericalError("solve_pressure: factorization failed");
  const Vec interior = ldlt.solve(out.source.head(n));
  out.pi = Vec::Zero(n + 1);
  out.pi.head(n) = interior;

  const double total = out.source.sum();
  out.boundary_flux = -total / (R * R);
  out.mean_g = total / (R * R * R);
  return out;
}

VISolution solve_axisym_vi(double R, const ModelParams& p, int k, double eps,
                           const AxisymOptions& opt) {
  if (!(R > 0.0)) throw DomainError("solve_axisym_vi: R must be positive");
  if (k < 0 || k > 8) throw DomainError("solve_axisym_vi: degree must lie in 0..8");
  if (!(std::abs(eps) <= 0.05)) throw DomainError("solve_axisym_vi: |eps| must not exceed 0.05");
  if (opt.n_r < 64 || opt.n_theta < 2) throw DomainError("solve_axisym_vi: grid too coarse");

  const Discretization d = discretize(R, k, eps, opt.n_r, opt.n_theta);
  // Warm start from the radial profile on the same scaled grid.
  const VISolution radial = solve_radial_vi(R, p, opt.n_r, opt.vi);
  Vec x0(d.unknowns());
  for (int i = 0; i < opt.n_r; ++i) {
    for (int j = 0; j < opt.n_theta; ++j) {
      const int idx = d.index(i, j);
      x0(idx) = radial.sigma(i, 0);
    }
  }
  VIOptions o = opt.vi;
  if (o.omega <= 0.0) o.omega = relaxation_from_radius(jacobi_radius(d.A, smooth_guess(d)));
  const PsorResult res = projected_sor(d.A, d.rhs, p.sigma_hat, x0, o);
  return package(d, R, p, res, true);
}

ModeMeasurement measure_mode(const VISolution& perturbed, const VISolution& reference, int k) {
  const Eigen::Index m = perturbed.x.size();
  if (reference.x.size() != m || reference.n != perturbed.n) {
    throw DomainError("measure_mode: grids differ");
  }
  if (k < 0 || k >= m) throw DomainError("measure_mode: degree out of range");
  ModeMeasurement out;
  out.eta.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!(reference.boundary_volume(j) > 0.0)) throw DomainError("measure_mode: reference has no core");
    out.eta(j) = perturbed.boundary_volume(j) / reference.boundary_volume(j) - 1.0;
  }
  out.coefficients.resize(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    double c = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      c += perturbed.weights(j) * out.eta(j) * legendre(int(l), perturbed.x(j));
    }
    out.coefficients(l) = 0.5 * (2 * l + 1) * c;
  }
  out.amplitude = out.coefficients(k);
  return out;
}

double richardson_gain(double c1, double eps1, double c2, double eps2) {
  if (!(eps1 != 0.0 && eps2 != 0.0 && eps1 != eps2)) {
    throw DomainError("richardson_gain: need two distinct nonzero amplitudes");
  }
  const double g1 = c1 / eps1, g2 = c2 / eps2;
  return (eps2 * g1 - eps1 * g2) / (eps2 - eps1);
}

}  // namespace necrotic
