#include <doctest.h>

#include <cmath>

#include "gkcs/coherent.hpp"
#include "gkcs/errors.hpp"
#include "gkcs/measure.hpp"
#include "gkcs/specfun.hpp"
#include "oracles.hpp"

using namespace gkcs;

TEST_CASE("Bessel-K reduction of the Meijer function passes its three-point check") {
  for (double u : {0.2, 0.5, 1.0, 2.0}) {
    const double a = 1.0 + 1.0 / (u * u);
    const auto v = validate_meijer_reduction(a);
    CHECK(v.passed);
    REQUIRE(v.samples.size() == 3);
    for (const auto& s : v.samples) CHECK(s.rel_err < 1e-8);
  }
}

TEST_CASE("Mellin-Barnes route at a closed-form point") {
  // G^{2,0}_{0,2}(x | 0, 1/2) = 2 x^{1/4} K_{1/2}(2 sqrt x) = sqrt(pi) e^{-2 sqrt x}
  for (double x : {0.3, 2.0, 9.0}) {
    const double ref = std::sqrt(M_PI) * std::exp(-2.0 * std::sqrt(x));
    CHECK(oracle::rel(meijer_g2002_mellin_barnes(x, 0.5), ref) < 1e-10);
    CHECK(oracle::rel(std::exp(log_meijer_g2002(x, 0.5)), ref) < 1e-12);
  }
}

TEST_CASE("measure moments reproduce rho_n") {
  for (double u : {0.2, 0.5}) {
    const auto m = SpectrumModel::quasi_harmonic(1.0, u);
    const auto rows = verify_measure_moments(m, 5);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
      INFO("u=" << u << " n=" << r.n);
      CHECK(r.converged);
      CHECK(r.rel_err < 1e-6);
      CHECK(r.rhs == doctest::Approx(std::exp(log_rho(m, r.n))).epsilon(1e-12));
    }
  }
  const auto half = verify_measure_moments(SpectrumModel::quasi_harmonic(1.0, 0.5), 1);
  CHECK(half[0].lhs == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(half[1].rhs == doctest::Approx(1.5).epsilon(1e-15));
  const auto fifth = verify_measure_moments(SpectrumModel::quasi_harmonic(1.0, 0.2), 3);
  CHECK(fifth[3].lhs / fifth[3].rhs == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("right-hand side of the moment identity is rho_n for n <= 20") {
  // n! Gamma(b + n) u^{2n} / Gamma(b) against the level product
  for (double u : {0.1, 0.2, 0.5, 1.0}) {
    const auto m = SpectrumModel::quasi_harmonic(1.0, u);
    const double b = 2.0 + 1.0 / (u * u);
    for (int n = 0; n <= 20; ++n) {
      const double rhs = specfun::log_gamma(n + 1.0) + specfun::log_pochhammer(b, n) + n * std::log(u * u);
      CHECK(std::fabs(rhs - log_rho(m, n)) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
    }
  }
}

TEST_CASE("measure weight integrates to one against the coherent normalization") {
  // w~ = w / N^2 is a probability density on J >= 0 (the n = 0 moment), for
  // stronger nonlinearity as well
  for (double u : {1.0, 2.0}) {
    const auto rows = verify_measure_moments(SpectrumModel::quasi_harmonic(1.0, u), 6);
    for (const auto& r : rows) CHECK(r.rel_err < 1e-8);
  }
}

TEST_CASE("measure errors") {
  CHECK_THROWS_AS(verify_measure_moments(SpectrumModel::quasi_harmonic(1.0, 0.5), 7), DomainError);
  CHECK_THROWS_AS(verify_measure_moments(SpectrumModel::morse(1.0), 2), DomainError);
  CHECK_THROWS_AS(verify_measure_moments(SpectrumModel::quasi_harmonic(1.0, 0.0), 2), DomainError);
  CHECK_THROWS_AS(log_meijer_g2002(0.0, 2.0), DomainError);
}
