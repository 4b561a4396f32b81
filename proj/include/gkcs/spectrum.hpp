#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gkcs {

enum class SpectrumKind { QuasiHarmonic, Morse, MathewsLakshmanan, Custom };

/// A discrete, non-degenerate spectrum n -> E_n together with its dimensionless
/// form e_n = (E_n - E_0) / omega, where omega is the model's energy scale.
///
/// Built-ins:
///   QuasiHarmonic      E_n = alpha [(n + 1/2) + upsilon^2 n (n + 1)],  e_n = n [1 + upsilon^2 (n + 1)]
///   Morse              E_n = e_n = n mu^2 (omega = 1, E_0 = 0)
///   MathewsLakshmanan  E_n = alpha [(n + 1/2) - (lambda~/2) n (n + 1)]
///
/// MathewsLakshmanan with lambda~ > 0 is truncated: levels stop increasing, and
/// n_max_valid() is the largest n with e_{n+1} > e_n.
///
/// Values are immutable after construction.
class SpectrumModel {
 public:
  static SpectrumModel quasi_harmonic(double alpha, double upsilon);
  static SpectrumModel morse(double mu);
  static SpectrumModel mathews_lakshmanan(double alpha, double lambda_tilde);
  /// Arbitrary dimensionless spectrum; `e` must give e(0) = 0 and increase strictly.
  static SpectrumModel custom(std::string name, std::function<double(int)> e, double omega = 1.0);

  SpectrumKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double upsilon() const { return upsilon_; }
  double mu() const { return mu_; }
  double lambda_tilde() const { return lambda_tilde_; }
  std::optional<int> n_max_valid() const { return n_max_valid_; }

  /// omega(alpha_1). Equal to alpha for every built-in (alpha is 1 for Morse).
  double omega() const { return alpha_; }
  double ground_energy() const;

  /// upsilon of the quasi-harmonic spectrum this model coincides with, if any.
  /// MathewsLakshmanan with lambda~ <= 0 maps onto upsilon = sqrt(-lambda~/2).
  std::optional<double> effective_upsilon() const;

  /// Dimensionless level e_n. Throws SpectrumRangeError past n_max_valid().
  double e(int n) const;
  double energy(int n) const;

  /// d^r e / dn^r at real n. Exact for the polynomial built-ins; central
  /// differences of unit step for Custom.
  double e_derivative(int order, double n) const;

  std::string name() const;
  /// Parameters outside the range the model was studied in (accepted, but reported).
  std::vector<std::string> warnings() const;

  friend bool operator==(const SpectrumModel& a, const SpectrumModel& b);

 private:
  SpectrumModel() = default;
  void check_level(int n) const;

  SpectrumKind kind_ = SpectrumKind::QuasiHarmonic;
  double alpha_ = 1.0;
  double upsilon_ = 0.0;
  double mu_ = 0.0;
  double lambda_tilde_ = 0.0;
  std::optional<int> n_max_valid_;
  std::string custom_name_;
  std::shared_ptr<const std::function<double(int)>> custom_e_;
};

/// Dimensionless level e_n of `model`.
double e_n(const SpectrumModel& model, int n);

/// E_n in energy units; energy(n) = omega * e_n + E_0.
double energy(const SpectrumModel& model, int n);

std::string to_string(SpectrumKind kind);

/// Shape-invariance chain: E_n = E_0 + sum_{i=1}^{n} R(alpha_i), alpha_{i+1} = f(alpha_i).
struct ShapeInvarianceChain {
  std::function<double(double)> remainder;
  std::function<double(double)> param_map;
  double alpha_1 = 1.0;
  double ground_energy = 0.0;

  /// Harmonic ladder: R = omega, f = identity.
  static ShapeInvarianceChain harmonic(double omega, double ground_energy);
  /// R(a) = omega (1 + 2 upsilon^2 a), f(a) = a + 1, alpha_1 = 1.
  static ShapeInvarianceChain quasi_harmonic(double omega, double upsilon, double ground_energy);
  /// R = mu^2 constant.
  static ShapeInvarianceChain morse(double mu);
  /// The energy-unit chain reproducing a built-in model (QuasiHarmonic, Morse,
  /// or MathewsLakshmanan with lambda~ <= 0).
  static ShapeInvarianceChain for_model(const SpectrumModel& model);
};

/// E_0 + sum of remainders along the chain. Throws InvalidChainError when a
/// remainder is not strictly positive.
double si_energy(const ShapeInvarianceChain& chain, int n);

/// si_energy for n = 0..n_max in one pass.
std::vector<double> si_spectrum(const ShapeInvarianceChain& chain, int n_max);

}  // namespace gkcs
