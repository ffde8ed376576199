#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rtrap/analytic.hpp"
#include "rtrap/error.hpp"

using namespace rtrap;
using std::numbers::pi;

TEST_CASE("ideal width") {
  // direct evaluation of the two branches
  CHECK(ideal_width(0.1).value == doctest::Approx(std::log((1 + 0.1 * pi) / (1 - 0.1 * pi)) / pi).epsilon(1e-14));
  CHECK(ideal_width(0.1).value == doctest::Approx(0.206999).epsilon(1e-5));
  CHECK(ideal_width(0.99 / pi).value == doctest::Approx(std::log(199.0) / pi).epsilon(1e-12));
  CHECK(ideal_width(0.99 / pi).value == doctest::Approx(1.6848).epsilon(1e-4));
  CHECK(ideal_width(1.0).value == doctest::Approx(0.20993).epsilon(1e-4));
  CHECK(ideal_width(0.0).value == 0.0);
  CHECK(ideal_width(1 / pi).kind == ValueKind::Divergent);
}

TEST_CASE("ideal width shape") {
  double prev = -1;
  for (int i = 0; i < 100; ++i) {
    const double a = (1 / pi) * i / 100.0;
    const double g = ideal_width(a).value;
    CHECK(g > prev);
    prev = g;
  }
  prev = 1e300;
  for (int i = 1; i < 100; ++i) {
    const double a = 1 / pi + 0.05 * i;
    const double g = ideal_width(a).value;
    CHECK(g < prev);
    prev = g;
  }
  // both sides diverge like -(1/pi) ln eps
  for (double eps : {1e-3, 1e-6}) {
    const double below = ideal_width((1 - eps) / pi).value;
    const double above = ideal_width((1 + eps) / pi).value;
    CHECK(below / (-std::log(eps) / pi) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(above / (-std::log(eps) / pi) == doctest::Approx(1.0).epsilon(0.15));
  }
}

TEST_CASE("finite-N estimates") {
  auto f = finite_n_estimates(1000, 1.0);
  REQUIRE(f.envelopeGammaHalf.finite());
  CHECK(f.envelopeGammaHalf.value == doctest::Approx(1.2816).epsilon(1e-4));
  auto g = finite_n_estimates(50, 3.0);
  CHECK(g.broadWidthAtCrit == doctest::Approx(1.0742).epsilon(1e-4));
  CHECK(g.traceSumAtCrit == doctest::Approx(101 / pi).epsilon(1e-14));
  CHECK(g.traceSumAtCrit == doctest::Approx(32.15).epsilon(1e-3));
  CHECK(finite_n_estimates(50, 0.0).envelopeGammaHalf.kind == ValueKind::Divergent);
  CHECK_THROWS_AS(finite_n_estimates(0, 1.0), Error);
  CHECK_THROWS_AS(finite_n_estimates(10, 11.0), Error);
}

TEST_CASE("arcosh form and its logarithmic envelope") {
  const int n = 1000;
  // the envelope touches where sin(2 pi E) = -1
  for (double e : {0.75, 2.75, 9.75}) {
    const double approx = finite_n_estimates(n, e).envelopeGammaHalf.value;
    CHECK(envelope_gamma_half_exact(n, e) == doctest::Approx(approx).epsilon(1e-6));
  }
  for (double e : {0.6, 1.7, 4.9}) {
    const double approx = finite_n_estimates(n, e).envelopeGammaHalf.value;
    CHECK(envelope_gamma_half_exact(n, e) <= approx);
  }
  // integer energies: cos = 1, sin = 0, so the width vanishes
  CHECK(envelope_gamma_half_exact(n, 3.0) < 1e-6);
  CHECK_THROWS_AS(envelope_gamma_half_exact(n, 0.25), Error);
}

TEST_CASE("disturbed fence relation") {
  CHECK(disturbed_alpha_of_mu(1.0, -0.5) == doctest::Approx(0.37688).epsilon(1e-4));
  for (double d : {-0.5, 0.0, 0.5, 2.0}) CHECK(disturbed_alpha_of_mu(1e3, d) == doctest::Approx(1 / pi).epsilon(1e-3));
  for (double mu : {1e-3, 0.1, 1.0, 5.0})
    CHECK(std::abs(disturbed_alpha_of_mu(mu, 0.0) - std::tanh(pi * mu) / pi) < 1e-12);
  // denominator D/(pi mu) + coth(pi mu) <= 0
  try {
    disturbed_alpha_of_mu(0.1, -2.0);
    FAIL("expected NoSolution");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSolution);
  }
}

TEST_CASE("disturbed fence inverse") {
  for (double d : {-0.5, 0.5}) {
    for (double a : {0.2, 0.3, 0.33, 0.36}) {
      auto mus = disturbed_mu_of_alpha(a, d);
      for (double mu : mus) CHECK(disturbed_alpha_of_mu(mu, d) == doctest::Approx(a).epsilon(1e-9));
      for (std::size_t i = 1; i < mus.size(); ++i) CHECK(mus[i] > mus[i - 1]);
    }
  }
  CHECK_FALSE(disturbed_mu_of_alpha(0.25, -0.5).empty());
}

TEST_CASE("singularity exponent") {
  auto f = fit_disturbed_singularity(0.5);
  CHECK(f.exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(f.prefactor == doctest::Approx(0.5).epsilon(0.05));
  auto g = fit_disturbed_singularity(-0.5);
  CHECK(g.exponent == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("diluted spectrum") {
  CHECK(diluted_alpha_of_mu(10.0) == doctest::Approx(1.42352264573604).epsilon(1e-13));
  CHECK(diluted_alpha_of_mu(10.0) == doctest::Approx(1.4236).epsilon(1e-4));
  CHECK(diluted_alpha_of_mu(2.0) > diluted_alpha_of_mu(1.0));
  CHECK(diluted_alpha_of_mu(1e-5) / 1e-5 == doctest::Approx(1.0).epsilon(1e-3));
  double prev = 0;
  for (int i = 0; i <= 120; ++i) {
    const double mu = std::pow(10.0, -3.0 + 6.0 * i / 120);
    const double a = diluted_alpha_of_mu(mu);
    CHECK(a > prev);
    prev = a;
  }
  // continuous across the series branch
  CHECK(diluted_alpha_of_mu(0.999e-3 * 0.999e-3 / (2 * pi * pi)) > 0);
}

TEST_CASE("power law critical coupling") {
  auto a = power_law_critical(0, 2);
  REQUIRE(a.finite());
  CHECK(a.value == doctest::Approx(1 / pi));
  CHECK(power_law_critical(1, 4).value == doctest::Approx(2 / pi));
  CHECK(power_law_critical(2, 4).kind == ValueKind::Zero);
  CHECK(power_law_critical(0, 4).kind == ValueKind::Infinite);
}

TEST_CASE("compensated broad width") {
  CHECK(compensated_broad_width(50, 0, 1.0) == doctest::Approx(100 / std::tan(0.5)).epsilon(1e-12));
  CHECK(compensated_broad_width(50, 0, 1.0) == doctest::Approx(183.1).epsilon(1e-3));
  CHECK(compensated_broad_width(50, 1, 0.75) == doctest::Approx(5000 / std::tan(4.0 / 3)).epsilon(1e-12));
  const double big = compensated_broad_width(50, 1, 1e4);
  CHECK(big / (4 * 2500 * 1e4 / 2) == doctest::Approx(1.0).epsilon(1e-4));
  try {
    compensated_broad_width(50, 1, 2 / pi);
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
}

TEST_CASE("complex coupling width") {
  CHECK(complex_coupling_width(1 / pi, 0.1).value == doctest::Approx(0.5931).epsilon(1e-4));
  CHECK(complex_coupling_width(1 / pi, 0.01).value == doctest::Approx(1.3221).epsilon(1e-4));
  CHECK(complex_coupling_width(0.1, 0.0).value == doctest::Approx(ideal_width(0.1).value).epsilon(1e-14));
  CHECK(complex_coupling_width(1 / pi, 0.0).kind == ValueKind::Divergent);
  double prev = 1e300;
  for (double b : {0.001, 0.01, 0.05, 0.1, 0.5}) {
    const double g = complex_coupling_width(1 / pi, b).value;
    CHECK(g < prev);
    CHECK(complex_coupling_width(1 / pi, -b).value == doctest::Approx(g));
    prev = g;
  }
}
