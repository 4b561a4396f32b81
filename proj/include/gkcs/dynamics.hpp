#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gkcs/coherent.hpp"

namespace gkcs {

/// Recurrence times T_(r) = 2 pi r! / (omega |d^r e_n / dn^r|) at the packet centre.
/// A timescale is absent when its derivative vanishes (linear or quadratic spectra).
struct Timescales {
  double t_classical = 0.0;
  std::optional<double> t_revival;
  std::optional<double> t_super;
};

Timescales timescales(const SpectrumModel& model, double n0);

/// Sampled autocorrelation A(t) = <J, gamma, t | J, gamma> = sum_n P_n e^{+i e_n omega t}.
/// The e^{-i...} convention of the evolved state differs by complex conjugation only.
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  std::shared_ptr<const CoherentState> state;
  double n0 = 0.0;
  Timescales scales;

  /// t / T_rev when the revival time exists, else t / T_cl.
  double tau(double t) const;
  double tau_classical(double t) const { return t / scales.t_classical; }
};

/// Uniform grid from 0 to `horizon` with at least `samples_per_classical` points
/// per T_cl. With a revival time the step divides T_rev exactly, so t = T_rev
/// (and its multiples) are grid points. Default horizon: 1.1 T_rev, else 10 T_cl.
std::vector<double> default_time_grid(const Timescales& scales, double samples_per_classical = 20.0,
                                      std::optional<double> horizon = std::nullopt);

std::complex<double> autocorrelation_at(const CoherentState& state, double t);

TimeSeries autocorrelation(const CoherentState& state, std::span<const double> t_grid);

struct RevivalEvent {
  double time = 0.0;
  double tau = 0.0;
  double amplitude_sq = 0.0;
  /// (p, q) with gcd(p, q) = 1 when the peak sits at a fractional revival p/q T_rev.
  std::optional<std::pair<int, int>> fraction;
};

/// Peaks of |A|^2 above `threshold`, labelled with the nearest p/q (q <= q_max).
///
/// Candidates are 3-point maxima of a 5-point moving average of |A|^2; each is
/// re-centred on the raw samples and then refined by evaluating the series
/// between neighbouring samples. A peak gets label p/q when it lies within
/// max(2 grid steps, T_cl / 2) of p/q T_rev: at a fractional revival the
/// sub-packets recur at offsets that are fractions of T_cl, so the nearest
/// autocorrelation peak can sit up to half a classical period away.
std::vector<RevivalEvent> detect_revivals(const TimeSeries& series, double threshold, int q_max);

/// Number of distinct fractions p/q (q <= q_max) among labelled events. Side peaks
/// flanking the same fractional revival count once.
int count_fractional_revivals(std::span<const RevivalEvent> events, int q_max);

}  // namespace gkcs
