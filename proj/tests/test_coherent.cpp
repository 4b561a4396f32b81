#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gkcs/coherent.hpp"
#include "gkcs/errors.hpp"
#include "oracles.hpp"

using namespace gkcs;

namespace {

SpectrumModel bounded_model() {
  return SpectrumModel::custom("1-2^-n", [](int n) { return 1.0 - std::ldexp(1.0, -n); });
}

double total(const CoherentState& s) {
  double acc = 0.0;
  for (double p : s.weights()) acc += p;
  return acc;
}

}  // namespace

TEST_CASE("log rho by substitution") {
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 0.5);
  CHECK(log_rho(qh, 0) == 0.0);
  CHECK(log_rho(qh, 2) == doctest::Approx(std::log(5.25)).epsilon(1e-15));
  CHECK(log_rho(SpectrumModel::morse(2.0), 3) == doctest::Approx(std::log(384.0)).epsilon(1e-15));
  CHECK(*log_rho_closed_form(SpectrumModel::morse(2.0), 3) == doctest::Approx(std::log(384.0)).epsilon(1e-15));
}

TEST_CASE("closed-form rho agrees with the product for n <= 200") {
  for (double u : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    const auto qh = SpectrumModel::quasi_harmonic(1.0, u);
    const auto table = log_rho_table(qh, 200);
    for (int n = 1; n <= 200; ++n) {
      const double cf = *log_rho_closed_form(qh, n);
      const long double ref = oracle::log_rho(oracle::qh_level(static_cast<long double>(u) * u), n);
      INFO("u=" << u << " n=" << n);
      CHECK(oracle::rel(cf, ref) < 1e-12);
      CHECK(oracle::rel(table[n], ref) < 1e-12);
    }
  }
  CHECK_FALSE(log_rho_closed_form(bounded_model(), 3));
}

TEST_CASE("a zero level past the ground state is degenerate") {
  const auto flat = SpectrumModel::custom("flat", [](int n) { return n < 3 ? static_cast<double>(n) : 2.0 - 2.0 * (n == 3); });
  CHECK_THROWS_AS(log_rho(flat, 3), DegenerateSpectrumError);
}

TEST_CASE("normalization reference values") {
  CHECK(log_normalization_sq(SpectrumModel::quasi_harmonic(1.0, 0.3), 0.0) == 0.0);
  CHECK(log_normalization_sq(SpectrumModel::morse(1.0), 3.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(*log_normalization_sq_closed_form(SpectrumModel::morse(1.0), 3.0) == 3.0);
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 0.1);
  const long double ref = std::log(oracle::moments(oracle::qh_level(0.01L), 5.9L).norm_sq);
  CHECK(oracle::rel(log_normalization_sq(qh, 5.9), ref) < 1e-12);
  CHECK(oracle::rel(*log_normalization_sq_closed_form(qh, 5.9), ref) < 1e-12);
}

TEST_CASE("closed-form normalization equals the series on the statistics grid") {
  for (double u : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    const auto qh = SpectrumModel::quasi_harmonic(1.0, u);
    for (int i = 0; i < 20; ++i) {
      const double J = 1e-2 * std::pow(5e4, i / 19.0);
      const double series = log_normalization_sq(qh, J);
      const double cf = *log_normalization_sq_closed_form(qh, J);
      CHECK(std::fabs(series - cf) <= 1e-12 * std::max(1.0, std::fabs(cf)));
    }
  }
}

TEST_CASE("radius of convergence") {
  CHECK(std::isinf(radius_of_convergence(SpectrumModel::quasi_harmonic(1.0, 0.3))));
  CHECK(std::isinf(radius_of_convergence(SpectrumModel::quasi_harmonic(1.0, 0.0))));
  CHECK(std::isinf(radius_of_convergence(SpectrumModel::morse(1.0))));
  CHECK(std::isinf(radius_of_convergence(SpectrumModel::morse(0.05))));
  CHECK(radius_of_convergence(bounded_model()) == doctest::Approx(1.0).epsilon(1e-3));
  const auto sat = SpectrumModel::custom("2n/(n+1)", [](int n) { return 2.0 * n / (n + 1.0); });
  // algebraic 1/n approach: the extrapolation is only good to ~1e-3 here
  CHECK(radius_of_convergence(sat) == doctest::Approx(2.0).epsilon(3e-3));
}

TEST_CASE("vacuum and basic construction") {
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 0.1);
  const auto vac = build_state(qh, 0.0, 0.0);
  CHECK(vac.truncation() == 1);
  CHECK(vac.weight(0) == 1.0);

  const auto s = build_state(qh, 5.9, 0.0);
  CHECK(s.truncation() >= 30);
  CHECK(total(s) == doctest::Approx(1.0).epsilon(1e-12));
  // dropped tail below 1e-15: compare against the oracle beyond the cut
  const auto p = oracle::probabilities(oracle::qh_level(0.01L), 5.9L);
  long double tail = 0;
  for (std::size_t n = s.truncation(); n < p.size(); ++n) tail += p[n];
  CHECK(static_cast<double>(tail) < 1e-15);
}

TEST_CASE("Morse weights are Poisson") {
  const auto s = build_state(SpectrumModel::morse(1.0), 4.0, 1.3);
  for (int n = 0; n < s.truncation(); ++n) {
    const double ref = static_cast<double>(oracle::poisson(4.0L, n));
    CHECK(std::fabs(s.weight(n) - ref) <= 1e-14 + 1e-12 * ref);
  }
  // phase convention e^{-i gamma e_n}
  const auto c = s.coefficient(2);
  CHECK(std::arg(c) == doctest::Approx(std::remainder(-1.3 * 2.0, 2 * std::numbers::pi)));
}

TEST_CASE("weights match the long-double oracle") {
  for (double u : {0.1, 0.5, 2.0}) {
    for (double J : {0.3, 24.9, 459.0}) {
      const auto s = build_state(SpectrumModel::quasi_harmonic(1.0, u), J, 0.0);
      const auto p = oracle::probabilities(oracle::qh_level(static_cast<long double>(u) * u), J);
      for (int n = 0; n < s.truncation(); ++n) {
        if (p[n] < 1e-200L) continue;
        CHECK(oracle::rel(s.weight(n), p[n]) < 1e-11);
      }
    }
  }
}

TEST_CASE("action identity sum P_n e_n = J") {
  for (const auto& m : {SpectrumModel::quasi_harmonic(1.0, 0.1), SpectrumModel::quasi_harmonic(3.0, 1.0),
                        SpectrumModel::morse(0.7), SpectrumModel::mathews_lakshmanan(1.0, -0.4)}) {
    for (double J : {0.01, 1.0, 17.0, 300.0}) {
      const auto s = build_state(m, J, 0.4);
      double acc = 0.0;
      for (int n = 0; n < s.truncation(); ++n) acc += s.weight(n) * s.levels()[n];
      CHECK(acc == doctest::Approx(J).epsilon(1e-12));
    }
  }
  const auto s = build_state(bounded_model(), 0.6, 0.0);
  double acc = 0.0;
  for (int n = 0; n < s.truncation(); ++n) acc += s.weight(n) * s.levels()[n];
  CHECK(acc == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("small nonlinearity approaches Poisson") {
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 1e-6);
  for (double J : {0.5, 5.0, 20.0}) {
    const auto s = build_state(qh, J, 0.0);
    double tv = 0.0;
    for (int n = 0; n < s.truncation(); ++n) tv += std::fabs(s.weight(n) - static_cast<double>(oracle::poisson(J, n)));
    CHECK(0.5 * tv < 1e-4);
  }
}

TEST_CASE("construction errors") {
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 0.1);
  CHECK_THROWS_AS(build_state(qh, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(build_state(qh, 1.0, NAN), DomainError);
  CHECK_THROWS_AS(build_state(bounded_model(), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(build_state(SpectrumModel::mathews_lakshmanan(1.0, 0.1), 1.0, 0.0), SpectrumRangeError);
  CHECK_THROWS_AS(log_normalization_sq(bounded_model(), 2.0), DomainError);
}

TEST_CASE("overlaps") {
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 0.1);
  const auto a = build_state(qh, 5.9, 0.3);
  const auto self = overlap(a, a);
  CHECK(self.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(self.imag()) < 1e-15);

  // gamma shifted by 2 pi / upsilon^2: every phase moves by a multiple of 2 pi
  const auto shifted = build_state(qh, 5.9, 0.3 + 2.0 * std::numbers::pi * 100.0);
  CHECK(std::abs(overlap(a, shifted)) == doctest::Approx(1.0).epsilon(1e-9));

  const auto b = build_state(qh, 5.9, 0.0);
  const auto c = build_state(qh, 24.9, 0.0);
  const auto bc = overlap(b, c);
  const auto pb = oracle::probabilities(oracle::qh_level(0.01L), 5.9L);
  const auto pc = oracle::probabilities(oracle::qh_level(0.01L), 24.9L);
  long double ref = 0;
  for (std::size_t n = 0; n < std::min(pb.size(), pc.size()); ++n) ref += std::sqrt(pb[n] * pc[n]);
  CHECK(bc.real() > 0.0);
  CHECK(bc.real() < 1.0);
  CHECK(std::fabs(bc.imag()) < 1e-15);
  CHECK(oracle::rel(bc.real(), ref) < 1e-10);

  const auto d = build_state(qh, 11.7, 1.1);
  CHECK(std::abs(overlap(a, d) - std::conj(overlap(d, a))) < 1e-15);
  CHECK(std::abs(overlap(a, d)) <= 1.0);

  CHECK_THROWS_AS(overlap(a, build_state(SpectrumModel::morse(1.0), 1.0, 0.0)), IncompatibleStatesError);
}

TEST_CASE("continuity gap") {
  const auto qh = SpectrumModel::quasi_harmonic(1.0, 0.1);
  const auto a = build_state(qh, 5.9, 0.0);
  CHECK(continuity_gap(a, a) == doctest::Approx(0.0));
  CHECK(continuity_gap(a, build_state(qh, 5.9 + 1e-6, 0.0)) < 1e-6);
  double prev = 0.0;
  for (double d : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const double g = continuity_gap(a, build_state(qh, 5.9, d));
    CHECK(g >= prev);
    CHECK(g <= 4.0);
    prev = g;
  }
  for (double J : {0.1, 24.9, 200.0}) {
    for (double gamma : {0.0, 1.0, 3.0}) {
      const double g = continuity_gap(a, build_state(qh, J, gamma));
      CHECK(g >= 0.0);
      CHECK(g <= 4.0);
    }
  }
}
