#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "gkcs/spectrum.hpp"

namespace gkcs {

/// ln rho_n = sum_{i=1}^{n} ln e_i (rho_0 = 1).
double log_rho(const SpectrumModel& model, int n);

/// ln rho_0 .. ln rho_{n_max} by cumulative summation.
std::vector<double> log_rho_table(const SpectrumModel& model, int n_max);

/// Closed form where one exists:
///   quasi-harmonic  ln[n! upsilon^{2n} Gamma(2 + 1/upsilon^2 + n) / Gamma(2 + 1/upsilon^2)]
///   Morse           ln[n! mu^{2n}]
std::optional<double> log_rho_closed_form(const SpectrumModel& model, int n);

/// R = lim rho_n^{1/n}, estimated from the ratio sequence rho_{n+1}/rho_n = e_{n+1}
/// on n in [200, 400]. Returns +inf when the sequence grows without bound.
double radius_of_convergence(const SpectrumModel& model);

/// ln N^2(J) = ln sum_n J^n / rho_n, by direct log-domain summation.
double log_normalization_sq(const SpectrumModel& model, double J);

/// ln 0F1(2 + 1/upsilon^2; J/upsilon^2) for quasi-harmonic spectra, J/mu^2 for Morse.
std::optional<double> log_normalization_sq_closed_form(const SpectrumModel& model, double J);

/// Gazeau-Klauder state |J, gamma> = N(J)^{-1} sum_n J^{n/2} e^{-i gamma e_n} rho_n^{-1/2} |n>,
/// truncated where the dropped tail is negligible. Immutable once built.
class CoherentState {
 public:
  const SpectrumModel& model() const { return model_; }
  double J() const { return J_; }
  double gamma() const { return gamma_; }
  /// Number of retained components (levels 0 .. truncation() - 1).
  int truncation() const { return static_cast<int>(log_weights_.size()); }
  /// ln P_n = ln(J^n / (N^2(J) rho_n)).
  std::span<const double> log_weights() const { return log_weights_; }
  /// Dimensionless levels e_n of the retained components.
  std::span<const double> levels() const { return levels_; }
  double log_normalization_sq() const { return log_norm_sq_; }

  double weight(int n) const;
  /// c_n = sqrt(P_n) e^{-i gamma e_n}.
  std::complex<double> coefficient(int n) const;
  std::vector<double> weights() const;

 private:
  friend CoherentState build_state(const SpectrumModel& model, double J, double gamma);
  CoherentState(SpectrumModel model, double J, double gamma) : model_(std::move(model)), J_(J), gamma_(gamma) {}

  SpectrumModel model_;
  double J_;
  double gamma_;
  double log_norm_sq_ = 0.0;
  std::vector<double> log_weights_;
  std::vector<double> levels_;
};

/// Builds the normalized state. Truncates at the first level past the mode with
/// P_n < 1e-18 max P_k and a geometric tail bound below 1e-18 (cap 5000 levels).
CoherentState build_state(const SpectrumModel& model, double J, double gamma);

/// <a|b> = sum_n conj(c_n^a) c_n^b.
std::complex<double> overlap(const CoherentState& a, const CoherentState& b);

/// || |a> - |b> ||^2 = 2 (1 - Re <a|b>).
double continuity_gap(const CoherentState& a, const CoherentState& b);

}  // namespace gkcs
