#include "gkcs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "gkcs/errors.hpp"

namespace gkcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::optional<double> recurrence_time(const SpectrumModel& model, int order, double n0) {
  const double d = model.e_derivative(order, n0);
  if (d == 0.0) return std::nullopt;
  double factorial = 1.0;
  for (int k = 2; k <= order; ++k) factorial *= k;
  return kTwoPi * factorial / (model.omega() * std::fabs(d));
}

}  // namespace

Timescales timescales(const SpectrumModel& model, double n0) {
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw DomainError("timescales: n0 must be finite and nonnegative");
  Timescales ts;
  const auto cl = recurrence_time(model, 1, n0);
  if (!cl) throw DomainError("timescales: first derivative of the spectrum vanishes at n0");
  ts.t_classical = *cl;
  ts.t_revival = recurrence_time(model, 2, n0);
  ts.t_super = recurrence_time(model, 3, n0);
  return ts;
}

double TimeSeries::tau(double t) const {
  return scales.t_revival ? t / *scales.t_revival : t / scales.t_classical;
}

std::vector<double> default_time_grid(const Timescales& scales, double samples_per_classical,
                                      std::optional<double> horizon) {
  if (!(samples_per_classical > 0.0)) throw DomainError("samples per classical period must be positive");
  double step = scales.t_classical / samples_per_classical;
  if (scales.t_revival) {
    const double per_revival = std::ceil(*scales.t_revival / step);
    step = *scales.t_revival / per_revival;
  }
  const double end = horizon.value_or(scales.t_revival ? 1.1 * *scales.t_revival : 10.0 * scales.t_classical);
  if (!(end >= 0.0) || !std::isfinite(end)) throw DomainError("time horizon must be finite and nonnegative");
  const auto count = static_cast<std::size_t>(std::floor(end / step * (1.0 + 1e-12))) + 1;
  std::vector<double> grid(count);
  if (scales.t_revival) {
    const double per_revival = std::round(*scales.t_revival / step);
    // i / M first, so t / T_rev is exactly k at the k-th revival sample
    for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) / per_revival * *scales.t_revival;
  } else {
    for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) * step;
  }
  return grid;
}

std::complex<double> autocorrelation_at(const CoherentState& state, double t) {
  const double omega_t = state.model().omega() * t;
  const auto lw = state.log_weights();
  const auto levels = state.levels();
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t n = 0; n < lw.size(); ++n) acc += std::polar(std::exp(lw[n]), levels[n] * omega_t);
  return acc;
}

TimeSeries autocorrelation(const CoherentState& state, std::span<const double> t_grid) {
  TimeSeries ts;
  ts.state = std::make_shared<const CoherentState>(state);
  const auto probs = state.weights();
  double mean = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) mean += static_cast<double>(n) * probs[n];
  ts.n0 = mean;
  ts.scales = timescales(state.model(), mean);
  ts.times.assign(t_grid.begin(), t_grid.end());
  ts.values.resize(ts.times.size());
  for (std::size_t i = 0; i < ts.times.size(); ++i) ts.values[i] = autocorrelation_at(state, ts.times[i]);
  return ts;
}

namespace {

double abs2(std::complex<double> z) { return std::norm(z); }

// Golden-section maximisation of |A(t)|^2 on [lo, hi].
std::pair<double, double> refine_peak(const CoherentState& state, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  const auto f = [&](double t) { return abs2(autocorrelation_at(state, t)); };
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 60 && (b - a) > 1e-12 * std::max(1.0, std::fabs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

}  // namespace

std::vector<RevivalEvent> detect_revivals(const TimeSeries& series, double threshold, int q_max) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("detect_revivals: threshold must lie in (0, 1)");
  if (q_max < 1) throw DomainError("detect_revivals: q_max must be >= 1");
  const std::size_t size = series.times.size();
  if (size < 5 || !series.state) throw DomainError("detect_revivals: series too short");

  const double step = series.times[1] - series.times[0];
  const double t_cl = series.scales.t_classical;
  if (!(step > 0.0) || t_cl / step < 10.0) {
    throw ResolutionError("detect_revivals: need at least 10 samples per classical period, have " +
                          std::to_string(t_cl / step));
  }
  const auto& t_rev = series.scales.t_revival;
  if (t_rev && series.times.back() < *t_rev * (1.0 - 1e-12)) {
    throw DomainError("detect_revivals: series must cover at least [0, T_rev]");
  }

  std::vector<double> raw(size);
  for (std::size_t i = 0; i < size; ++i) raw[i] = abs2(series.values[i]);
  std::vector<double> smooth(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(size - 1, i + 2);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += raw[k];
    smooth[i] = s / static_cast<double>(hi - lo + 1);
  }

  const double label_tol = std::max(2.0 * step, 0.5 * t_cl);
  std::vector<RevivalEvent> events;
  std::size_t last_peak = size;
  for (std::size_t i = 1; i + 1 < size; ++i) {
    if (!(smooth[i] >= smooth[i - 1] && smooth[i] > smooth[i + 1])) continue;
    // Re-centre on the raw samples around the smoothed maximum.
    std::size_t best = i;
    for (std::size_t k = (i >= 2 ? i - 2 : 0); k <= std::min(size - 1, i + 2); ++k) {
      if (raw[k] > raw[best]) best = k;
    }
    if (best == 0 || best == last_peak) continue;
    last_peak = best;
    const double lo = series.times[best - 1];
    const double hi = series.times[std::min(size - 1, best + 1)];
    auto [t_peak, a2] = refine_peak(*series.state, lo, hi);
    if (raw[best] > a2) {
      t_peak = series.times[best];
      a2 = raw[best];
    }
    if (a2 < threshold) continue;

    RevivalEvent ev;
    ev.time = t_peak;
    ev.tau = series.tau(t_peak);
    ev.amplitude_sq = a2;
    if (t_rev) {
      double best_dist = std::numeric_limits<double>::infinity();
      for (int q = 1; q <= q_max; ++q) {
        const int p = static_cast<int>(std::lround(t_peak / *t_rev * q));
        if (p < 1 || std::gcd(p, q) != 1) continue;
        const double dist = std::fabs(t_peak - *t_rev * p / q);
        if (dist <= label_tol && dist < best_dist) {
          best_dist = dist;
          ev.fraction = std::make_pair(p, q);
        }
      }
    }
    events.push_back(ev);
  }
  return events;
}

int count_fractional_revivals(std::span<const RevivalEvent> events, int q_max) {
  std::vector<std::pair<int, int>> seen;
  for (const auto& ev : events) {
    if (!ev.fraction || ev.fraction->second > q_max) continue;
    if (std::find(seen.begin(), seen.end(), *ev.fraction) == seen.end()) seen.push_back(*ev.fraction);
  }
  return static_cast<int>(seen.size());
}

}  // namespace gkcs
