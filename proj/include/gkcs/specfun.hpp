#pragma once

// Real-argument special functions used by the coherent-state machinery.
//
// Everything that can overflow binary64 at the operating points of interest
// (0F1 at z ~ 1e5, K_nu at small argument and large order) has a log-domain
// entry point; the plain versions are exp() of those and may return +inf.

namespace gkcs::specfun {

struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 10'000;

  void validate() const;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln (b)_n = ln Gamma(b + n) - ln Gamma(b), evaluated in extended precision so
/// that the difference keeps full double accuracy even when both terms are large.
double log_pochhammer(double b, int n);

/// ln 0F1(; b; z) for b > 0, z >= 0.
///
/// Terms are generated by the ratio t_{k+1}/t_k = z / ((b + k)(k + 1)) and
/// accumulated with a running max-shift, so nothing overflows. Summation stops
/// once the geometric bound on the remaining tail drops below ctl.rel_tol of
/// the partial sum.
double log_hyp0f1(double b, double z, const SeriesControl& ctl = {});

double hyp0f1(double b, double z, const SeriesControl& ctl = {});

/// ln K_nu(x) for real order nu and x > 0, from
///   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
double log_bessel_k(double nu, double x);

/// K_nu(x); relative error well below 1e-8 wherever the result is representable.
double bessel_k(double nu, double x);

}  // namespace gkcs::specfun
