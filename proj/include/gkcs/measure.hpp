#pragma once

#include <vector>

#include "gkcs/spectrum.hpp"

// Numerical check of the resolution of unity for quasi-harmonic coherent states.
//
// The measure weight is w(J) = 0F1(b; J/u^2) / (u^2 Gamma(b)) * G^{2,0}_{0,2}(J/u^2 | 0, a)
// with a = 1 + 1/u^2 and b = a + 1. The Meijer function is evaluated through
//   G^{2,0}_{0,2}(x | 0, a) = 2 x^{a/2} K_a(2 sqrt(x)),
// which validate_meijer_reduction() checks against the Mellin-Barnes integral
//   G(x) = (1/2 pi i) int Gamma(s) Gamma(s + a) x^{-s} ds
// before any moment is trusted.

namespace gkcs {

struct MeijerSample {
  double x = 0.0;
  double via_bessel = 0.0;
  double via_mellin_barnes = 0.0;
  double rel_err = 0.0;
};

struct MeijerValidation {
  double order = 0.0;
  std::vector<MeijerSample> samples;
  bool passed = false;
};

/// ln G^{2,0}_{0,2}(x | 0, order) through the Bessel-K reduction, x > 0.
double log_meijer_g2002(double x, double order);

/// Same function from a direct Mellin-Barnes contour integral (independent route).
double meijer_g2002_mellin_barnes(double x, double order);

/// Compares both routes at three sample points; passes when all agree to `tol`.
MeijerValidation validate_meijer_reduction(double order, double tol = 1e-8);

/// ln w~(J) with w~ = w / N^2, for a quasi-harmonic model with upsilon > 0.
double log_measure_weight(const SpectrumModel& model, double J);

struct MomentRow {
  int n = 0;
  double lhs = 0.0;  // int_0^inf w~(J) J^n dJ
  double rhs = 0.0;  // n! Gamma(b + n) u^{2n} / Gamma(b)
  double rel_err = 0.0;
  bool converged = false;
};

/// Moments n = 0..n_max (n_max <= 6) of the measure against rho_n. Quadrature
/// uses 100 Gauss-Legendre panels of 20 nodes, uniform in sqrt(J) on [0, J*],
/// J* placed where every integrand has fallen below 1e-18 of its peak; a
/// half-resolution pass flags rows whose value moved by more than 1e-9.
std::vector<MomentRow> verify_measure_moments(const SpectrumModel& model, int n_max);

}  // namespace gkcs
