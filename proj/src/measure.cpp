#include "gkcs/measure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "gkcs/coherent.hpp"
#include "gkcs/errors.hpp"
#include "gkcs/quadrature.hpp"
#include "gkcs/specfun.hpp"

namespace gkcs {

namespace {

using cplx = std::complex<double>;

// ln Gamma(z) for Re z > 0: upward recurrence to |z| >= 15, then Stirling.
cplx log_gamma_complex(cplx z) {
  cplx shift{0.0, 0.0};
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  // Bernoulli terms B_2k / (2k (2k - 1) z^{2k-1}), k = 1..7.
  constexpr double c[] = {1.0 / 12.0,   -1.0 / 360.0,          1.0 / 1260.0, -1.0 / 1680.0,
                          1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0};
  cplx series{0.0, 0.0};
  for (int k = 6; k >= 0; --k) series = series * inv2 + c[k];
  series *= inv;
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

double upsilon_sq_of(const SpectrumModel& model) {
  const auto u = model.effective_upsilon();
  if (!u || !(*u > 0.0)) {
    throw DomainError("measure check needs a quasi-harmonic spectrum with upsilon > 0, got " + model.name());
  }
  return *u * *u;
}

}  // namespace

double log_meijer_g2002(double x, double order) {
  if (!(x > 0.0)) throw DomainError("Meijer G: x must be positive");
  return std::log(2.0) + 0.5 * order * std::log(x) + specfun::log_bessel_k(order, 2.0 * std::sqrt(x));
}

double meijer_g2002_mellin_barnes(double x, double order) {
  if (!(x > 0.0)) throw DomainError("Meijer G: x must be positive");
  if (!(order >= 0.0)) throw DomainError("Meijer G: order must be nonnegative");
  const double log_x = std::log(x);

  // Contour Re s = c sits at the real saddle of |Gamma(s) Gamma(s + a) x^{-s}|.
  double c = 0.05;
  double best = std::numeric_limits<double>::infinity();
  for (double trial = 0.05; trial <= 200.0; trial += 0.05) {
    const double v = specfun::log_gamma(trial) + specfun::log_gamma(trial + order) - trial * log_x;
    if (v < best) {
      best = v;
      c = trial;
    }
  }
  const auto log_integrand = [&](double y) {
    const cplx s{c, y};
    return log_gamma_complex(s) + log_gamma_complex(s + order) - s * log_x;
  };
  const double ref = log_integrand(0.0).real();
  double upper = 4.0;
  while (log_integrand(upper).real() > ref - std::log(1e20)) upper *= 1.5;

  // Integrand is conjugate-symmetric in y, so G = (1/pi) int_0^inf Re(...) dy.
  const auto f = [&](double y) { return std::exp(log_integrand(y) - ref).real(); };
  int panels = 64;
  double h = upper / panels;
  double sum = 0.5 * (f(0.0) + f(upper));
  for (int i = 1; i < panels; ++i) sum += f(i * h);
  double estimate = h * sum;
  for (int level = 0; level < 18; ++level) {
    double mid = 0.0;
    for (int i = 0; i < panels; ++i) mid += f((i + 0.5) * h);
    sum += mid;
    panels *= 2;
    h *= 0.5;
    const double refined = h * sum;
    if (level >= 1 && std::fabs(refined - estimate) <= 1e-13 * std::fabs(refined)) {
      return std::exp(ref) * refined / std::numbers::pi;
    }
    estimate = refined;
  }
  throw ConvergenceError("Mellin-Barnes integral did not converge");
}

MeijerValidation validate_meijer_reduction(double order, double tol) {
  MeijerValidation v;
  v.order = order;
  v.passed = true;
  for (double x : {0.5, order + 1.0, 4.0 * (order + 1.0)}) {
    MeijerSample s;
    s.x = x;
    s.via_bessel = std::exp(log_meijer_g2002(x, order));
    s.via_mellin_barnes = meijer_g2002_mellin_barnes(x, order);
    s.rel_err = std::fabs(s.via_bessel - s.via_mellin_barnes) / std::fabs(s.via_mellin_barnes);
    if (!(s.rel_err <= tol)) v.passed = false;
    v.samples.push_back(s);
  }
  return v;
}

double log_measure_weight(const SpectrumModel& model, double J) {
  const double u2 = upsilon_sq_of(model);
  if (!(J > 0.0)) throw DomainError("measure weight: J must be positive");
  const double a = 1.0 + 1.0 / u2;
  const double b = a + 1.0;
  const double z = J / u2;
  const double log_f = specfun::log_hyp0f1(b, z);
  const double log_w = log_f - std::log(u2) - specfun::log_gamma(b) + log_meijer_g2002(z, a);
  const double log_norm_sq = *log_normalization_sq_closed_form(model, J);
  return log_w - log_norm_sq;
}

std::vector<MomentRow> verify_measure_moments(const SpectrumModel& model, int n_max) {
  const double u2 = upsilon_sq_of(model);
  if (n_max < 0 || n_max > 6) throw DomainError("verify_measure_moments: n_max must be in [0, 6]");
  const double a = 1.0 + 1.0 / u2;

  const auto log_f = [&](int n, double J) { return log_measure_weight(model, J) + n * std::log(J); };

  // In x = J/u^2 the integrand behaves like x^{n + a/2 - 1/4} exp(-2 sqrt x);
  // its peak sits near sqrt x = n + a/2 - 1/4.
  std::vector<double> peaks(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double u_peak = std::max(n + 0.5 * a - 0.25, 0.5);
    double best = -std::numeric_limits<double>::infinity();
    for (double s = 0.25 * u_peak; s <= 2.0 * u_peak + 2.0; s += 0.01 * u_peak + 0.01) {
      best = std::max(best, log_f(n, u2 * s * s));
    }
    peaks[n] = best;
  }
  const double drop = std::log(1e18);
  double j_star = u2 * std::pow(n_max + 0.5 * a + 1.0, 2);
  for (;;) {
    bool below = true;
    for (int n = 0; n <= n_max; ++n) below = below && (log_f(n, j_star) < peaks[n] - drop);
    if (below) break;
    j_star *= 1.2;
  }

  const auto gl = quadrature::gauss_legendre(20);
  // Panels are uniform in s = sqrt(J / u^2), where the integrand looks like
  // s^p exp(-2 s); in J the weight has a sqrt-type singular expansion at 0.
  // All moments share the weight evaluation at each node.
  const double s_star = std::sqrt(j_star / u2);
  const auto integrate = [&](int panels) {
    std::vector<double> acc(n_max + 1, 0.0);
    const double width = s_star / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * width;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double s = mid + 0.5 * width * gl.nodes[k];
        const double J = u2 * s * s;
        const double lw = log_measure_weight(model, J) + std::log(2.0 * u2 * s);
        const double lj = std::log(J);
        for (int n = 0; n <= n_max; ++n) {
          acc[n] += 0.5 * width * gl.weights[k] * std::exp(lw + n * lj - peaks[n]);
        }
      }
    }
    return acc;
  };
  const auto fine = integrate(100);
  const auto coarse = integrate(50);

  std::vector<MomentRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    MomentRow row;
    row.n = n;
    row.lhs = std::exp(peaks[n]) * fine[n];
    row.rhs = std::exp(*log_rho_closed_form(model, n));
    row.rel_err = std::fabs(row.lhs - row.rhs) / row.rhs;
    row.converged = std::fabs(fine[n] - coarse[n]) <= 1e-9 * std::fabs(fine[n]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gkcs
