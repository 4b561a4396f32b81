#pragma once

#include <vector>

#include "gkcs/coherent.hpp"
#include "gkcs/spectrum.hpp"

namespace gkcs {

/// P_n = J^n / (N^2(J) rho_n) and its summary moments.
struct WeightingDistribution {
  std::vector<double> probs;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  /// ((Delta n)^2 - <n>) / <n>; 0 for the vacuum.
  double mandel_q = 0.0;
};

enum class PhotonStatistics { SubPoissonian, Poissonian, SuperPoissonian };

WeightingDistribution distribution(const CoherentState& state);
WeightingDistribution distribution(const SpectrumModel& model, double J);

/// Q from direct summation. Uses factorial moments, (<n(n-1)> - <n>^2) / <n>,
/// which is the same quantity but keeps precision when Q is small.
double mandel_q(const SpectrumModel& model, double J);

PhotonStatistics classify(double q, double tol = 0.0);

// Closed forms for quasi-harmonic spectra (and anything mapping onto one);
// upsilon = 0 falls back to the Poisson limit. Morse gives the Poisson values.
// Other spectra raise DomainError.
double mean_closed_form(const SpectrumModel& model, double J);
double variance_closed_form(const SpectrumModel& model, double J);
double mandel_q_closed_form(const SpectrumModel& model, double J);

/// J with <n>(J) = n0 to 1e-8, by bracketing and bisection on the increasing mean.
double solve_j(const SpectrumModel& model, double n0);

}  // namespace gkcs
