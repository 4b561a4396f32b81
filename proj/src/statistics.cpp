#include "gkcs/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gkcs/errors.hpp"
#include "gkcs/specfun.hpp"

namespace gkcs {

WeightingDistribution distribution(const CoherentState& state) {
  WeightingDistribution d;
  d.probs = state.weights();
  double mean = 0.0;
  double second = 0.0;
  double falling = 0.0;
  for (std::size_t n = 0; n < d.probs.size(); ++n) {
    const double x = static_cast<double>(n);
    mean += x * d.probs[n];
    second += x * x * d.probs[n];
    falling += x * (x - 1.0) * d.probs[n];
  }
  double centered = 0.0;
  for (std::size_t n = 0; n < d.probs.size(); ++n) {
    const double dx = static_cast<double>(n) - mean;
    centered += dx * dx * d.probs[n];
  }
  d.mean = mean;
  d.second_moment = second;
  d.variance = centered;
  d.mandel_q = mean > 0.0 ? (falling - mean * mean) / mean : 0.0;
  return d;
}

WeightingDistribution distribution(const SpectrumModel& model, double J) {
  return distribution(build_state(model, J, 0.0));
}

double mandel_q(const SpectrumModel& model, double J) {
  if (J == 0.0) return 0.0;
  return distribution(model, J).mandel_q;
}

PhotonStatistics classify(double q, double tol) {
  if (q < -tol) return PhotonStatistics::SubPoissonian;
  if (q > tol) return PhotonStatistics::SuperPoissonian;
  return PhotonStatistics::Poissonian;
}

namespace {

struct HypRatios {
  double u2;
  double f3_over_f2;  // 0F1(3 + 1/u2; z) / 0F1(2 + 1/u2; z)
  double f4_over_f2;
  double f4_over_f3;
};

// u2 == 0 encodes the Poisson limit, where every ratio is 1.
HypRatios quasi_harmonic_ratios(const SpectrumModel& model, double J) {
  if (!(J >= 0.0) || !std::isfinite(J)) throw DomainError("J must be finite and nonnegative");
  const auto u = model.effective_upsilon();
  if (!u) throw DomainError("closed-form moments need a quasi-harmonic spectrum, got " + model.name());
  const double u2 = *u * *u;
  if (u2 == 0.0) return {0.0, 1.0, 1.0, 1.0};
  const double z = J / u2;
  const double l2 = specfun::log_hyp0f1(2.0 + 1.0 / u2, z);
  const double l3 = specfun::log_hyp0f1(3.0 + 1.0 / u2, z);
  const double l4 = specfun::log_hyp0f1(4.0 + 1.0 / u2, z);
  return {u2, std::exp(l3 - l2), std::exp(l4 - l2), std::exp(l4 - l3)};
}

bool is_morse(const SpectrumModel& model) { return model.kind() == SpectrumKind::Morse; }

}  // namespace

double mean_closed_form(const SpectrumModel& model, double J) {
  if (is_morse(model)) return J / (model.mu() * model.mu());
  const auto r = quasi_harmonic_ratios(model, J);
  return J / (2.0 * r.u2 + 1.0) * r.f3_over_f2;
}

double variance_closed_form(const SpectrumModel& model, double J) {
  if (is_morse(model)) return J / (model.mu() * model.mu());
  const auto r = quasi_harmonic_ratios(model, J);
  const double mean = J / (2.0 * r.u2 + 1.0) * r.f3_over_f2;
  return mean * (1.0 - mean) + J * J / ((2.0 * r.u2 + 1.0) * (3.0 * r.u2 + 1.0)) * r.f4_over_f2;
}

double mandel_q_closed_form(const SpectrumModel& model, double J) {
  if (is_morse(model)) return 0.0;
  if (J == 0.0) return 0.0;
  const auto r = quasi_harmonic_ratios(model, J);
  return J / (3.0 * r.u2 + 1.0) * r.f4_over_f3 - J / (2.0 * r.u2 + 1.0) * r.f3_over_f2;
}

double solve_j(const SpectrumModel& model, double n0) {
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw DomainError("solve_j: n0 must be finite and nonnegative");
  if (model.n_max_valid()) {
    throw SpectrumRangeError("solve_j: no coherent states on the truncated spectrum " + model.name());
  }
  if (n0 == 0.0) return 0.0;

  const auto mean_at = [&](double J) { return distribution(model, J).mean; };

  // J = <e_n> >= <n> on these spectra, and e at the target level sets the scale.
  // Below a finite radius the bracket creeps toward R instead of doubling.
  const double radius = radius_of_convergence(model);
  const bool bounded = std::isfinite(radius);
  double hi = 10.0 * std::max(1.0, model.e(static_cast<int>(std::ceil(n0))));
  if (bounded) hi = std::min(hi, 0.5 * radius);
  double lo = 0.0;
  const auto unreachable = [&] {
    return SpectrumRangeError("solve_j: mean " + std::to_string(n0) + " is not reachable for " + model.name());
  };
  for (int expand = 0;; ++expand) {
    double m = 0.0;
    try {
      m = mean_at(hi);
    } catch (const ConvergenceError&) {
      throw unreachable();
    }
    if (m >= n0) break;
    if (expand > 60) throw unreachable();
    lo = hi;
    hi = bounded ? hi + 0.5 * (radius - hi) : 2.0 * hi;
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean_at(mid);
    if (std::fabs(m - n0) < 1e-10) return mid;
    if (m < n0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace gkcs
