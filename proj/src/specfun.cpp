#include "gkcs/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gkcs/errors.hpp"

namespace gkcs::specfun {

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("SeriesControl: rel_tol must be positive");
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
}

namespace {

long double log_gamma_ext(long double x) {
  int sign = 0;
  return ::lgammal_r(x, &sign);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return static_cast<double>(log_gamma_ext(x));
}

double log_pochhammer(double b, int n) {
  if (!(b > 0.0)) throw DomainError("log_pochhammer: b must be positive");
  if (n < 0) throw DomainError("log_pochhammer: n must be nonnegative");
  if (n == 0) return 0.0;
  const long double lb = b;
  return static_cast<double>(log_gamma_ext(lb + n) - log_gamma_ext(lb));
}

double log_hyp0f1(double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (!(b > 0.0)) throw DomainError("hyp0f1: b must be positive");
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("hyp0f1: z must be finite and nonnegative");
  if (z == 0.0) return 0.0;

  const double log_z = std::log(z);
  // Partial sum is exp(shift) * scaled, with the k = 0 term equal to one.
  double shift = 0.0;
  double scaled = 1.0;
  double log_term = 0.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    log_term += log_z - std::log((b + k) * (k + 1.0));
    if (log_term > shift) {
      scaled = scaled * std::exp(shift - log_term) + 1.0;
      shift = log_term;
    } else {
      scaled += std::exp(log_term - shift);
    }
    const double next_ratio = z / ((b + k + 1.0) * (k + 2.0));
    if (next_ratio < 1.0) {
      const double rel_term = std::exp(log_term - shift) / scaled;
      if (rel_term * next_ratio / (1.0 - next_ratio) < ctl.rel_tol) {
        return shift + std::log(scaled);
      }
    }
  }
  throw ConvergenceError("hyp0f1: no convergence within " + std::to_string(ctl.max_terms) +
                         " terms (b=" + std::to_string(b) + ", z=" + std::to_string(z) + ")");
}

double hyp0f1(double b, double z, const SeriesControl& ctl) {
  return std::exp(log_hyp0f1(b, z, ctl));
}

namespace {

// ln cosh(y) for y >= 0 without overflow.
double log_cosh(double y) {
  return y + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
}

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k: x must be positive and finite");
  if (!std::isfinite(nu)) throw DomainError("bessel_k: order must be finite");
  nu = std::fabs(nu);

  const auto log_integrand = [&](double t) { return -x * std::cosh(t) + log_cosh(nu * t); };

  // The integrand exp(g) is unimodal with its peak near sinh t = nu / x.
  const double t_peak = std::asinh(nu / x);
  const double g_peak = std::fmax(log_integrand(0.0), log_integrand(t_peak));
  const double cutoff = std::log(1e20);

  double upper = std::fmax(2.0 * t_peak, 1.0);
  while (log_integrand(upper) > g_peak - cutoff) upper = 1.25 * upper + 0.5;

  const auto f = [&](double t) { return std::exp(log_integrand(t) - g_peak); };

  // The integrand is even in t and negligible at `upper`, so the trapezoid rule
  // converges geometrically; refine by halving until two levels agree.
  int panels = 32;
  double h = upper / panels;
  double sum = 0.5 * (f(0.0) + f(upper));
  for (int i = 1; i < panels; ++i) sum += f(i * h);
  double estimate = h * sum;

  for (int level = 0; level < 20; ++level) {
    double mid = 0.0;
    for (int i = 0; i < panels; ++i) mid += f((i + 0.5) * h);
    sum += mid;
    panels *= 2;
    h *= 0.5;
    const double refined = h * sum;
    // geometric convergence: the refined value is far better than this difference
    if (level >= 1 && std::fabs(refined - estimate) <= 1e-14 * refined) {
      return g_peak + std::log(refined);
    }
    estimate = refined;
  }
  throw ConvergenceError("bessel_k: quadrature did not converge (nu=" + std::to_string(nu) +
                         ", x=" + std::to_string(x) + ")");
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

}  // namespace gkcs::specfun
