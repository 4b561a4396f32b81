#include "gkcs/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gkcs/errors.hpp"
#include "gkcs/specfun.hpp"

namespace gkcs {

namespace {

constexpr int kMaxLevels = 5000;
const double kLogCutoff = std::log(1e-18);

double checked_level(const SpectrumModel& model, int i) {
  const double e = model.e(i);
  if (!(e > 0.0)) {
    throw DegenerateSpectrumError("e_" + std::to_string(i) + " = " + std::to_string(e) + " is not positive");
  }
  return e;
}

double log_sum_exp(std::span<const double> xs) {
  const double m = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

double log_rho(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainError("log_rho: n must be nonnegative");
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) acc += std::log(checked_level(model, i));
  return acc;
}

std::vector<double> log_rho_table(const SpectrumModel& model, int n_max) {
  if (n_max < 0) throw DomainError("log_rho_table: n_max must be nonnegative");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int i = 1; i <= n_max; ++i) out[i] = out[i - 1] + std::log(checked_level(model, i));
  return out;
}

std::optional<double> log_rho_closed_form(const SpectrumModel& model, int n) {
  if (n < 0) throw DomainError("log_rho_closed_form: n must be nonnegative");
  if (model.kind() == SpectrumKind::Morse) {
    return specfun::log_gamma(n + 1.0) + 2.0 * n * std::log(model.mu());
  }
  const auto u = model.effective_upsilon();
  if (!u || *u == 0.0) return std::nullopt;
  const double u2 = *u * *u;
  const double b = 2.0 + 1.0 / u2;
  return specfun::log_gamma(n + 1.0) + n * std::log(u2) + specfun::log_pochhammer(b, n);
}

double radius_of_convergence(const SpectrumModel& model) {
  if (model.n_max_valid()) {
    // A truncated spectrum gives a finite sum, convergent for every J.
    return std::numeric_limits<double>::infinity();
  }
  constexpr int lo = 200;
  constexpr int mid = 300;
  constexpr int hi = 400;
  double prev = model.e(lo);
  bool increasing = true;
  for (int n = lo + 1; n <= hi; ++n) {
    const double cur = model.e(n);
    if (cur > 1e6) return std::numeric_limits<double>::infinity();
    if (cur < prev) increasing = false;
    prev = cur;
  }
  const double e_lo = model.e(lo);
  const double e_mid = model.e(mid);
  const double e_hi = model.e(hi);
  const double d1 = e_mid - e_lo;
  const double d2 = e_hi - e_mid;
  // Unbounded growth (even logarithmic) keeps successive increments comparable;
  // convergent tails shrink them by at least half over the window.
  if (increasing && d1 > 0.0 && d2 >= 0.6 * d1) return std::numeric_limits<double>::infinity();
  // Aitken extrapolation of e_200, e_300, e_400 towards the limit.
  if (d2 != d1) {
    const double extrapolated = e_hi - d2 * d2 / (d2 - d1);
    if (std::isfinite(extrapolated) && extrapolated >= e_hi) return extrapolated;
  }
  return e_hi;
}

double log_normalization_sq(const SpectrumModel& model, double J) {
  return build_state(model, J, 0.0).log_normalization_sq();
}

std::optional<double> log_normalization_sq_closed_form(const SpectrumModel& model, double J) {
  if (!(J >= 0.0) || !std::isfinite(J)) throw DomainError("J must be finite and nonnegative");
  if (model.kind() == SpectrumKind::Morse) return J / (model.mu() * model.mu());
  const auto u = model.effective_upsilon();
  if (!u || *u == 0.0) return std::nullopt;
  const double u2 = *u * *u;
  return specfun::log_hyp0f1(2.0 + 1.0 / u2, J / u2);
}

double CoherentState::weight(int n) const {
  if (n < 0) throw DomainError("weight: n must be nonnegative");
  if (n >= truncation()) return 0.0;
  return std::exp(log_weights_[n]);
}

std::complex<double> CoherentState::coefficient(int n) const {
  if (n < 0 || n >= truncation()) return {0.0, 0.0};
  return std::polar(std::exp(0.5 * log_weights_[n]), -gamma_ * levels_[n]);
}

std::vector<double> CoherentState::weights() const {
  std::vector<double> out(log_weights_.size());
  std::transform(log_weights_.begin(), log_weights_.end(), out.begin(), [](double l) { return std::exp(l); });
  return out;
}

CoherentState build_state(const SpectrumModel& model, double J, double gamma) {
  if (!(J >= 0.0) || !std::isfinite(J)) throw DomainError("J must be finite and nonnegative");
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
  if (model.n_max_valid()) {
    throw SpectrumRangeError("coherent states on a truncated spectrum (" + model.name() + ") are not supported");
  }
  const double radius = radius_of_convergence(model);
  if (!(J < radius)) {
    throw DomainError("J = " + std::to_string(J) + " is outside the convergence domain (R = " +
                      std::to_string(radius) + ")");
  }

  CoherentState state(model, J, gamma);
  if (J == 0.0) {
    state.log_weights_ = {0.0};
    state.levels_ = {0.0};
    state.log_norm_sq_ = 0.0;
    return state;
  }

  const double log_J = std::log(J);
  std::vector<double> terms{0.0};
  std::vector<double> levels{0.0};
  double log_rho_n = 0.0;
  double term_max = 0.0;
  bool done = false;
  for (int n = 1; n < kMaxLevels; ++n) {
    const double e = checked_level(model, n);
    log_rho_n += std::log(e);
    const double t = n * log_J - log_rho_n;
    terms.push_back(t);
    levels.push_back(e);
    term_max = std::max(term_max, t);
    const bool past_mode = t < terms[n - 1];
    if (past_mode && t - term_max < kLogCutoff) {
      // Later terms shrink at least by r = J / e_{n+1} each step.
      const double r = J / model.e(n + 1);
      if (r < 1.0 && std::exp(t - term_max) * r / (1.0 - r) < 1e-18) {
        done = true;
        break;
      }
    }
  }
  if (!done) {
    throw ConvergenceError("coherent state needs more than " + std::to_string(kMaxLevels) + " levels at J = " +
                           std::to_string(J));
  }

  state.log_norm_sq_ = log_sum_exp(terms);
  for (double& t : terms) t -= state.log_norm_sq_;
  state.log_weights_ = std::move(terms);
  state.levels_ = std::move(levels);
  return state;
}

std::complex<double> overlap(const CoherentState& a, const CoherentState& b) {
  if (!(a.model() == b.model())) {
    throw IncompatibleStatesError("overlap of states built on different spectra: " + a.model().name() + " vs " +
                                  b.model().name());
  }
  const int n = std::min(a.truncation(), b.truncation());
  const double dgamma = a.gamma() - b.gamma();
  const auto la = a.log_weights();
  const auto lb = b.log_weights();
  const auto levels = a.levels();
  std::complex<double> acc{0.0, 0.0};
  for (int k = 0; k < n; ++k) acc += std::polar(std::exp(0.5 * (la[k] + lb[k])), dgamma * levels[k]);
  return acc;
}

double continuity_gap(const CoherentState& a, const CoherentState& b) {
  return std::max(0.0, 2.0 * (1.0 - overlap(a, b).real()));
}

}  // namespace gkcs
