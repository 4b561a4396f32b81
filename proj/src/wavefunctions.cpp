#include "gkcs/wavefunctions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "gkcs/errors.hpp"
#include "gkcs/quadrature.hpp"

namespace gkcs {

namespace {

constexpr int kMinGridPoints = 2000;

void require_deformed(const SpectrumModel& model, const char* where) {
  if (model.kind() != SpectrumKind::QuasiHarmonic) {
    throw DomainError(std::string(where) + ": eigenfunctions exist only for the quasi-harmonic model");
  }
  if (!(model.upsilon() > 0.0)) throw DomainError(std::string(where) + ": upsilon must be positive");
}

void check_grid_mu(const SpectrumModel& model, const GridSpec& grid) {
  const double mu = deformation_mu(model);
  if (std::fabs(grid.mu() - mu) > 1e-14 * mu) {
    throw GridError("grid was built for mu = " + std::to_string(grid.mu()) + ", model needs mu = " +
                    std::to_string(mu));
  }
}

// Central-difference weights, offsets -p/2 .. p/2.
struct Stencil {
  std::vector<double> d1;
  std::vector<double> d2;
};

Stencil central_stencil(int order) {
  switch (order) {
    case 2:
      return {{-1.0 / 2, 0.0, 1.0 / 2}, {1.0, -2.0, 1.0}};
    case 4:
      return {{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12}, {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12}};
    case 6:
      return {{-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60},
              {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90}};
    case 8:
      return {{1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280},
              {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560}};
    default:
      throw DomainError("stencil order must be 2, 4, 6 or 8");
  }
}

// ln of the envelope [1 - (mu rho)^2]^{1/(2 mu^2)}.
double log_envelope(double wall, double mu) { return std::log(wall) / (2.0 * mu * mu); }

}  // namespace

double deformation_mu(const SpectrumModel& model) {
  require_deformed(model, "deformation_mu");
  return std::numbers::sqrt2 * model.upsilon();
}

double PolynomialRep::operator()(double rho) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * rho + *it;
  return acc;
}

PolynomialRep modified_hermite(int n, double mu) {
  if (n < 0) throw DomainError("modified_hermite: n must be >= 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("modified_hermite: mu must be positive");
  const double mu2 = mu * mu;
  // mu^2 (s - k) = 1 + mu^2 (n - k); keeps the coefficient O(1) for small mu
  std::vector<double> p{1.0};
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * (1.0 + mu2 * (n - k));
    std::vector<double> next(p.size() + 1, 0.0);
    for (std::size_t j = 1; j < p.size(); ++j) {
      const double dp = static_cast<double>(j) * p[j];  // coefficient of rho^{j-1} in p'
      next[j - 1] += dp;
      next[j + 1] -= mu2 * dp;
    }
    for (std::size_t j = 0; j < p.size(); ++j) next[j + 1] -= c * p[j];
    p = std::move(next);
  }
  if (n % 2 == 1) {
    for (auto& c : p) c = -c;
  }
  return {std::move(p)};
}

double modified_hermite_value(int n, double mu, double rho) {
  if (n < 0) throw DomainError("modified_hermite_value: n must be >= 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("modified_hermite_value: mu must be >= 0");
  const double mu2 = mu * mu;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * (1.0 + mu2) * rho;
  for (int k = 1; k < n; ++k) {
    const double den = 2.0 + mu2 * (k + 1);
    const double a = 2.0 * rho * (1.0 + mu2 * (k + 1)) * (2.0 + mu2 * (2 * k + 1)) / den;
    const double b = 4.0 * k * (1.0 + mu2 * (k + 1)) * (1.0 + mu2 * k) / den;
    const double next = a * cur - b * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

GridSpec GridSpec::interior(double mu, int points, double margin, GridCoordinate coordinate) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw GridError("grid: mu must be positive");
  if (points < kMinGridPoints) {
    throw GridError("grid: need at least " + std::to_string(kMinGridPoints) + " points, got " + std::to_string(points));
  }
  const double half = 1.0 / mu;
  const double eps = margin < 0.0 ? 1e-6 * half : margin;
  if (!(eps > 0.0) || eps >= half) throw GridError("grid: margin must lie in (0, 1/mu)");

  GridSpec g;
  g.mu_ = mu;
  g.margin_ = eps;
  g.coordinate_ = coordinate;
  g.rho_.resize(points);
  g.wall_.resize(points);
  g.jac_.resize(points);
  g.jac_d_.resize(points);
  const double edge = half - eps;
  if (coordinate == GridCoordinate::Uniform) {
    g.step_ = 2.0 * edge / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double r = (i == points - 1) ? edge : -edge + i * g.step_;
      g.rho_[i] = r;
      g.wall_[i] = (1.0 - mu * r) * (1.0 + mu * r);
      g.jac_[i] = 1.0;
      g.jac_d_[i] = 0.0;
    }
  } else {
    const double theta_max = std::asin(edge * mu);
    g.step_ = 2.0 * theta_max / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double th = (i == points - 1) ? theta_max : -theta_max + i * g.step_;
      const double c = std::cos(th);
      g.rho_[i] = std::sin(th) / mu;
      g.wall_[i] = c * c;
      g.jac_[i] = c / mu;
      g.jac_d_[i] = -std::sin(th) / mu;
    }
  }
  g.weights_ = quadrature::simpson_weights(points, g.step_);
  for (int i = 0; i < points; ++i) g.weights_[i] *= g.jac_[i];
  return g;
}

GridSpec GridSpec::for_model(const SpectrumModel& model, int points, GridCoordinate coordinate) {
  require_deformed(model, "grid");
  return interior(deformation_mu(model), points, -1.0, coordinate);
}

GridSpec GridSpec::window(double mu, double lo, double hi, int points) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw GridError("grid: mu must be positive");
  if (points < kMinGridPoints) {
    throw GridError("grid: need at least " + std::to_string(kMinGridPoints) + " points, got " + std::to_string(points));
  }
  if (!(lo < hi)) throw GridError("grid: window needs lo < hi");
  if (!(lo > -1.0 / mu && hi < 1.0 / mu)) throw GridError("grid: window must lie strictly inside (-1/mu, 1/mu)");
  GridSpec g;
  g.mu_ = mu;
  g.margin_ = std::min(lo + 1.0 / mu, 1.0 / mu - hi);
  g.coordinate_ = GridCoordinate::Uniform;
  g.step_ = (hi - lo) / (points - 1);
  g.rho_.resize(points);
  g.wall_.resize(points);
  g.jac_.assign(points, 1.0);
  g.jac_d_.assign(points, 0.0);
  for (int i = 0; i < points; ++i) {
    const double r = (i == points - 1) ? hi : lo + i * g.step_;
    g.rho_[i] = r;
    g.wall_[i] = (1.0 - mu * r) * (1.0 + mu * r);
  }
  g.weights_ = quadrature::simpson_weights(points, g.step_);
  return g;
}

double integrate(const GridSpec& grid, std::span<const double> values) {
  if (values.size() != grid.weights().size()) throw GridError("integrate: sample count does not match grid");
  double acc = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) acc += w[i] * values[i];
  return acc;
}

std::vector<std::vector<double>> eigenfunctions(int n_max, const SpectrumModel& model, const GridSpec& grid) {
  require_deformed(model, "eigenfunctions");
  check_grid_mu(model, grid);
  if (n_max < 0) throw DomainError("eigenfunctions: n_max must be >= 0");
  const double mu = grid.mu();
  const double mu2 = mu * mu;
  const auto rho = grid.rho();
  const auto wall = grid.wall_factor();
  const auto jac = grid.jacobian();
  const std::size_t m = rho.size();

  // h_k = H_k / s_k with s_k chosen so max |h_k| = 1; `ratio` carries s_{k-1}/s_k.
  std::vector<double> env(m);
  for (std::size_t i = 0; i < m; ++i) env[i] = std::exp(log_envelope(wall[i], mu));
  std::vector<double> prev(m, 1.0);
  std::vector<double> cur(m);
  std::vector<double> next(m);
  double prev_over_cur = 0.0;
  for (std::size_t i = 0; i < m; ++i) cur[i] = 2.0 * (1.0 + mu2) * rho[i];

  std::vector<std::vector<double>> out;
  out.reserve(n_max + 1);
  const auto emit = [&](const std::vector<double>& h) {
    std::vector<double> psi(m);
    for (std::size_t i = 0; i < m; ++i) psi[i] = h[i] * env[i];
    std::vector<double> sq(m);
    for (std::size_t i = 0; i < m; ++i) sq[i] = psi[i] * psi[i];
    const double norm = integrate(grid, sq);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ConvergenceError("eigenfunctions: normalization integral is " + std::to_string(norm));
    }
    // Trapezoid on the same samples as an error estimate for Simpson.
    double trap = 0.0;
    for (std::size_t i = 0; i < m; ++i) trap += (i == 0 || i + 1 == m ? 0.5 : 1.0) * jac[i] * sq[i];
    trap *= grid.step();
    const double estimate = std::fabs(trap - norm) / norm;
    if (estimate > 1e-6) {
      throw ConvergenceError("eigenfunctions: normalization quadrature unresolved at n = " +
                             std::to_string(out.size()) + " (relative estimate " + std::to_string(estimate) + ")");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : psi) v *= scale;
    out.push_back(std::move(psi));
  };
  const auto rescale = [&](std::vector<double>& h) {
    double peak = 0.0;
    for (double v : h) peak = std::max(peak, std::fabs(v));
    if (peak == 0.0) return 1.0;
    for (auto& v : h) v /= peak;
    return peak;
  };

  emit(prev);
  if (n_max == 0) return out;
  prev_over_cur = 1.0 / rescale(cur);
  emit(cur);
  for (int k = 1; k < n_max; ++k) {
    const double den = 2.0 + mu2 * (k + 1);
    const double a = 2.0 * (1.0 + mu2 * (k + 1)) * (2.0 + mu2 * (2 * k + 1)) / den;
    const double b = 4.0 * k * (1.0 + mu2 * (k + 1)) * (1.0 + mu2 * k) / den;
    for (std::size_t i = 0; i < m; ++i) next[i] = a * rho[i] * cur[i] - b * prev_over_cur * prev[i];
    const double s = rescale(next);
    prev_over_cur = 1.0 / s;
    std::swap(prev, cur);
    std::swap(cur, next);
    emit(cur);
  }
  return out;
}

SampledFunction eigenfunction(int n, const SpectrumModel& model, const GridSpec& grid) {
  if (n < 0) throw DomainError("eigenfunction: n must be >= 0");
  auto all = eigenfunctions(n, model, grid);
  const auto rho = grid.rho();
  return {std::vector<double>(rho.begin(), rho.end()), std::move(all.back())};
}

double hamiltonian_residual(int n, const SpectrumModel& model, const GridSpec& grid, int order) {
  require_deformed(model, "hamiltonian_residual");
  const Stencil st = central_stencil(order);
  const auto psi = eigenfunction(n, model, grid).values;
  const int half = order / 2;
  const int m = grid.size();
  if (m < 2 * half + 3) throw GridError("hamiltonian_residual: grid too small for stencil");

  const double mu2 = grid.mu() * grid.mu();
  const double alpha = model.alpha();
  const double energy = model.energy(n);
  const double h = grid.step();
  const auto rho = grid.rho();
  const auto wall = grid.wall_factor();
  const auto jac = grid.jacobian();
  const auto jac_d = grid.jacobian_derivative();
  const auto w = grid.weights();

  double res2 = 0.0;
  double norm2 = 0.0;
  for (int i = half; i < m - half; ++i) {
    double ds = 0.0;
    double dss = 0.0;
    for (int k = -half; k <= half; ++k) {
      ds += st.d1[k + half] * psi[i + k];
      dss += st.d2[k + half] * psi[i + k];
    }
    ds /= h;
    dss /= h * h;
    const double d1 = ds / jac[i];
    const double d2 = (dss - jac_d[i] / jac[i] * ds) / (jac[i] * jac[i]);
    const double h_psi =
        0.5 * alpha * (-wall[i] * d2 + 2.0 * mu2 * rho[i] * d1 + rho[i] * rho[i] / wall[i] * psi[i]);
    const double r = h_psi - energy * psi[i];
    if (!std::isfinite(r)) throw GridError("hamiltonian_residual: non-finite operator value near the wall; enlarge the margin");
    res2 += w[i] * r * r;
    norm2 += w[i] * psi[i] * psi[i];
  }
  return std::sqrt(res2 / norm2);
}

double hamiltonian_residual(int n, const SpectrumModel& model, int order) {
  require_deformed(model, "hamiltonian_residual");
  return hamiltonian_residual(n, model, GridSpec::for_model(model, 4001, GridCoordinate::Arcsine), order);
}

SampledFunction coherent_density(const CoherentState& state, const GridSpec& grid, double t) {
  const auto& model = state.model();
  require_deformed(model, "coherent_density");
  if (!std::isfinite(t)) throw DomainError("coherent_density: t must be finite");
  const int count = state.truncation();
  const auto psi = eigenfunctions(count - 1, model, grid);
  const double omega_t = model.omega() * t;
  const auto levels = state.levels();
  const std::size_t m = psi.front().size();
  std::vector<std::complex<double>> amp(m, {0.0, 0.0});
  for (int n = 0; n < count; ++n) {
    const std::complex<double> c = state.coefficient(n) * std::polar(1.0, -levels[n] * omega_t);
    for (std::size_t i = 0; i < m; ++i) amp[i] += c * psi[n][i];
  }
  SampledFunction out;
  const auto rho = grid.rho();
  out.rho.assign(rho.begin(), rho.end());
  out.values.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.values[i] = std::norm(amp[i]);
  return out;
}

}  // namespace gkcs
