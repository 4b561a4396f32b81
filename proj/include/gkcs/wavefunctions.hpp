#pragma once

#include <span>
#include <vector>

#include "gkcs/coherent.hpp"

namespace gkcs {

/// Dense coefficients in ascending powers of the dimensionless position rho.
struct PolynomialRep {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double rho) const;
};

/// mu-deformed Hermite polynomial
///   H_n(rho, mu) = (-1)^n [1 - (mu rho)^2]^{-1/mu^2} d^n/drho^n [1 - (mu rho)^2]^{1/mu^2 + n}
/// built from p_0 = 1, p_{k+1} = (1 - mu^2 rho^2) p_k' - 2 mu^2 (s - k) rho p_k, s = 1/mu^2 + n.
/// Reduces to the physicists' Hermite polynomial as mu -> 0.
PolynomialRep modified_hermite(int n, double mu);

/// H_n(rho, mu) from the three-term recurrence
///   H_{n+1} = A_n H_n - B_n H_{n-1},
///   A_n = 2 rho (1 + mu^2 (n+1)) (2 + mu^2 (2n+1)) / (2 + mu^2 (n+1)),
///   B_n = 4 n (1 + mu^2 (n+1)) (1 + mu^2 n) / (2 + mu^2 (n+1)).
/// Numerically stable where the expanded coefficients cancel badly.
double modified_hermite_value(int n, double mu, double rho);

enum class GridCoordinate {
  Uniform,  ///< equally spaced in rho
  Arcsine,  ///< rho = sin(theta) / mu, equally spaced in theta
};

/// Deformation parameter of the position-space eigenfunctions of a quasi-harmonic model.
///
/// With rho = x sqrt(2 alpha) and mu = lambda / sqrt(2 alpha), the eigenfunctions
/// H_n(rho, mu) [1 - (mu rho)^2]^{1/(2 mu^2)} of the mass-deformed Hamiltonian below
/// have E_n = alpha [(n + 1/2) + (mu^2 / 2) n (n + 1)]. Matching the model spectrum
/// alpha [(n + 1/2) + upsilon^2 n (n + 1)] therefore needs mu = sqrt(2) upsilon, not
/// the 2 upsilon used to label the spectrum.
double deformation_mu(const SpectrumModel& model);

/// Samples of rho strictly inside (-1/mu, 1/mu), with quadrature weights in rho.
///
/// The arcsine map clusters points at the walls, where the eigenfunctions of
/// strongly deformed oscillators have square-root-like endpoint behaviour; in
/// theta they are smooth, so high-order stencils stay accurate up to the edge.
class GridSpec {
 public:
  /// Interior grid for the eigenfunctions of `model` (uses deformation_mu).
  static GridSpec for_model(const SpectrumModel& model, int points = 4001,
                            GridCoordinate coordinate = GridCoordinate::Uniform);
  /// Whole interval minus a margin eps (default 1e-6 / mu) at each end.
  static GridSpec interior(double mu, int points = 4001, double margin = -1.0,
                           GridCoordinate coordinate = GridCoordinate::Uniform);
  /// Uniform grid on [lo, hi]; must lie inside the interval. Needed for mu -> 0
  /// where the interval is far wider than the support of low eigenfunctions.
  static GridSpec window(double mu, double lo, double hi, int points = 4001);

  double mu() const { return mu_; }
  GridCoordinate coordinate() const { return coordinate_; }
  int size() const { return static_cast<int>(rho_.size()); }
  /// Spacing in the native coordinate (rho or theta).
  double step() const { return step_; }
  double margin() const { return margin_; }
  std::span<const double> rho() const { return rho_; }
  /// 1 - (mu rho)^2, computed without cancellation.
  std::span<const double> wall_factor() const { return wall_; }
  /// d rho / ds and d^2 rho / ds^2 for the native coordinate s.
  std::span<const double> jacobian() const { return jac_; }
  std::span<const double> jacobian_derivative() const { return jac_d_; }
  /// Quadrature weights for integrals d rho (Simpson in s times the Jacobian).
  std::span<const double> weights() const { return weights_; }

 private:
  GridSpec() = default;
  double mu_ = 0.0;
  double step_ = 0.0;
  double margin_ = 0.0;
  GridCoordinate coordinate_ = GridCoordinate::Uniform;
  std::vector<double> rho_, wall_, jac_, jac_d_, weights_;
};

struct SampledFunction {
  std::vector<double> rho;
  std::vector<double> values;
};

double integrate(const GridSpec& grid, std::span<const double> values);

/// psi_n = N_n H_n(rho, mu) [1 - (mu rho)^2]^{1/(2 mu^2)} with mu = deformation_mu(model),
/// normalized on the grid.
SampledFunction eigenfunction(int n, const SpectrumModel& model, const GridSpec& grid);

/// psi_0 .. psi_{n_max}. Evaluated jointly with per-level rescaling so the
/// recurrence never overflows at large n.
std::vector<std::vector<double>> eigenfunctions(int n_max, const SpectrumModel& model, const GridSpec& grid);

/// || H psi_n - E_n psi_n ||_2 / || psi_n ||_2 where H is the position-dependent-mass
/// Hamiltonian in rho = x sqrt(2 alpha):
///   (alpha / 2) [ -(1 - mu^2 rho^2) d^2/drho^2 + 2 mu^2 rho d/drho + rho^2 / (1 - mu^2 rho^2) ]
/// discretized by central differences of the given order (2, 4, 6 or 8) in the
/// native grid coordinate. The order/2 samples nearest each end are excluded.
double hamiltonian_residual(int n, const SpectrumModel& model, const GridSpec& grid, int order = 8);

/// Same on the default residual grid: 4001 arcsine points, margin 1e-6 / mu.
double hamiltonian_residual(int n, const SpectrumModel& model, int order = 8);

/// |sum_n c_n e^{-i e_n omega t} psi_n(rho)|^2 for a quasi-harmonic state.
SampledFunction coherent_density(const CoherentState& state, const GridSpec& grid, double t);

}  // namespace gkcs
