#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numeric>

#include "rtrap/error.hpp"
#include "rtrap/model.hpp"

using namespace rtrap;

namespace {

SpectrumSpec spec(Family f, int n) {
  SpectrumSpec s;
  s.family = f;
  s.n = n;
  return s;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// exact equality, the centre level may be stored as -0.0
void check_mirror(const ModelInstance& m) {
  const std::size_t n = m.size();
  CHECK(m.mirrorSymmetric);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(m.energies[i] == -m.energies[n - 1 - i]);
    CHECK(same_bits(m.couplings[i], m.couplings[n - 1 - i]));
  }
}

}  // namespace

TEST_CASE("ideal picket fence N=2") {
  auto m = build_model(spec(Family::IdealPicketFence, 2));
  CHECK(m.energies == std::vector<double>{-2, -1, 0, 1, 2});
  CHECK(m.couplings == std::vector<double>{1, 1, 1, 1, 1});
  CHECK(m.firstIndex == -2);
  CHECK(m.mirrorSymmetric);
  CHECK(m.index_of(m.center_slot()) == 0);
}

TEST_CASE("disturbed fence N=1, D=-0.5") {
  auto s = spec(Family::DisturbedFence, 1);
  s.disturbance = -0.5;
  auto m = build_model(s);
  CHECK(m.energies == std::vector<double>{-1, 0, 1});
  CHECK(m.couplings == std::vector<double>{1, 0.5, 1});
}

TEST_CASE("power law with offset") {
  auto s = spec(Family::PowerLaw, 2);
  s.levelExponent = 2;
  s.couplingExponent = 1;
  auto m = build_model(s);
  CHECK(m.energies == std::vector<double>{-4, -1, 0, 1, 4});
  const std::vector<double> w2{3, 2, 1, 2, 3};
  for (std::size_t i = 0; i < 5; ++i) CHECK(m.weight(i) == doctest::Approx(w2[i]).epsilon(1e-15));
}

TEST_CASE("power law without offset keeps the centre coupled for r = 0") {
  auto s = spec(Family::PowerLaw, 3);
  s.levelExponent = 2;
  s.couplingExponent = 0;
  s.couplingOffset = false;
  auto m = build_model(s);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.weight(i) == doctest::Approx(1.0));
  CHECK(m.energies.back() == 9.0);
}

TEST_CASE("bounded power law") {
  auto s = spec(Family::BoundedPowerLaw, 3);
  s.levelExponent = 2;
  s.couplingExponent = 1;
  auto m = build_model(s);
  REQUIRE(m.size() == 4);
  CHECK(m.energies == std::vector<double>{0, 1, 4, 9});
  CHECK(m.weight(3) == doctest::Approx(4.0));
  CHECK(m.firstIndex == 0);
  CHECK_FALSE(m.mirrorSymmetric);
}

TEST_CASE("symmetric families are mirror symmetric bit for bit") {
  check_mirror(build_model(spec(Family::IdealPicketFence, 50)));
  check_mirror(make_model({-0.5, 0.5}, {1, 1}, "pair"));
  CHECK_FALSE(make_model({-0.5, 0.6}, {1, 1}, "skew").mirrorSymmetric);
  auto d = spec(Family::DisturbedFence, 20);
  d.disturbance = 0.3;
  check_mirror(build_model(d));
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    auto s = spec(Family::PowerLaw, 30);
    s.levelExponent = p;
    s.couplingExponent = 0.7;
    check_mirror(build_model(s));
  }
}

TEST_CASE("N = 0 gives one level") {
  auto m = build_model(spec(Family::IdealPicketFence, 0));
  CHECK(m.size() == 1);
  CHECK(m.energies[0] == 0.0);
}

TEST_CASE("GOE spectra are reproducible and unfolded") {
  auto s = spec(Family::GoeUnfolded, 50);
  s.seed = 42;
  auto a = build_model(s);
  auto b = build_model(s);
  REQUIRE(a.size() == 101);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_bits(a.energies[i], b.energies[i]));
    CHECK(same_bits(a.couplings[i], b.couplings[i]));
  }
  s.seed = 43;
  auto c = build_model(s);
  CHECK(c.energies != a.energies);
  CHECK(a.mean_spacing() == doctest::Approx(1.0).epsilon(0.01));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.couplings[i] >= 0.0);
  const double centre = std::accumulate(a.energies.begin(), a.energies.end(), 0.0) / a.size();
  CHECK(std::abs(centre) < 1.0);
}

TEST_CASE("GOE couplings follow meanV and varV") {
  auto s = spec(Family::GoeUnfolded, 500);
  s.seed = 7;
  s.meanV = 1.0;
  s.varV = 0.01;
  auto m = build_model(s);
  double mean = 0, var = 0;
  for (double v : m.couplings) mean += v;
  mean /= m.size();
  for (double v : m.couplings) var += (v - mean) * (v - mean);
  var /= m.size() - 1;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
  CHECK(var == doctest::Approx(0.01).epsilon(0.2));
}

TEST_CASE("unfold_goe") {
  auto u = unfold_goe(std::vector<double>{-1, 0, 1});
  REQUIRE(u.size() == 3);
  CHECK(u[0] == doctest::Approx(-1.0));
  CHECK(u[1] == doctest::Approx(0.0));
  CHECK(u[2] == doctest::Approx(1.0));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto raw = sample_goe_spectrum(101, seed);
    auto out = unfold_goe(raw);
    REQUIRE(out.size() == 101);
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i] > out[i - 1]);
    CHECK((out.back() - out.front()) / 100.0 == doctest::Approx(1.0).epsilon(0.01));
  }

  CHECK_THROWS_AS(unfold_goe(std::vector<double>{0, 1}), Error);
}

TEST_CASE("validation") {
  auto s = spec(Family::GoeUnfolded, 5);
  s.varV = -1;
  try {
    build_model(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
  }
  auto p = spec(Family::PowerLaw, 3);
  p.levelExponent = 0;
  CHECK_THROWS_AS(build_model(p), Error);
  CHECK_THROWS_AS(build_model(spec(Family::IdealPicketFence, -1)), Error);

  try {
    make_model({0, 1, 1}, {1, 1, 1}, "dup");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Construction);
  }
  CHECK_THROWS_AS(make_model({0, 1}, {1, -1}, "neg"), Error);
  CHECK_THROWS_AS(make_model({0, 1}, {1}, "size"), Error);
  CHECK(family_from_string("disturbed") == Family::DisturbedFence);
  CHECK_THROWS_AS(family_from_string("fence"), Error);
}

TEST_CASE("coupling ray") {
  auto k = CouplingParam::on_ray(0.5, std::atan(0.2));
  CHECK(k.alpha == 0.5);
  CHECK(k.beta == doctest::Approx(0.1));
  CHECK(k.phi() == doctest::Approx(std::atan(0.2)));
  CHECK(CouplingParam{1.0, 0.0}.phi() == 0.0);
}
