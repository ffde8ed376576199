#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rtrap/eigens.hpp"
#include "rtrap/error.hpp"
#include "rtrap/tracker.hpp"

using namespace rtrap;
using std::numbers::pi;

namespace {

ModelInstance fence(int n) {
  SpectrumSpec s;
  s.n = n;
  return build_model(s);
}

ModelInstance random_model(int m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.2, 1.8), cv(0.1, 1.6);
  std::vector<double> e, v;
  double x = -0.5 * m;
  for (int i = 0; i < m; ++i) {
    x += gap(rng);
    e.push_back(x);
    v.push_back(cv(rng));
  }
  return make_model(e, v, "random");
}

std::vector<cplx> row(const TrajectorySet& t, std::size_t g) {
  return {t.lambdas.begin() + g * t.states, t.lambdas.begin() + (g + 1) * t.states};
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("ideal fence N=50 at alpha = 0.01") {
  auto m = fence(50);
  auto t = track_trajectories(m, {0.01}, 0.0);
  for (std::size_t k = 0; k < t.states; ++k) CHECK(-t.at(0, k).imag() == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("trace identity, lower half plane and residuals") {
  auto m = fence(50);
  auto g = grid(0.01, 2.0, 200);
  auto t = track_trajectories(m, g, 0.0);
  const double w = m.total_weight();
  for (std::size_t i = 0; i < g.size(); ++i) {
    cplx sum = 0;
    for (std::size_t k = 0; k < t.states; ++k) {
      const cplx l = t.at(i, k);
      sum += l;
      CHECK(l.imag() < 0.0);
    }
    CHECK(std::abs(-sum.imag() - g[i] * w) < 1e-8 * g[i] * w);
    CHECK(std::abs(sum.real()) < 1e-8 * g[i] * w);
  }
  const CouplingParam k{1.3, 0.0};
  auto roots = solve_at(m, k);
  for (const cplx& l : roots) CHECK(std::abs(secular_value(m, k, l).value) < 1e-10);
}

TEST_CASE("mirror symmetry of the tracked multiset") {
  auto m = fence(30);
  auto t = track_trajectories(m, grid(0.05, 1.5, 40), 0.0);
  for (std::size_t g = 0; g < t.grid_size(); ++g) {
    auto r = row(t, g);
    std::vector<cplx> mirrored;
    for (const cplx& l : r) mirrored.push_back(-std::conj(l));
    CHECK(multiset_distance(r, mirrored) < 1e-10);
  }
}

TEST_CASE("small and large coupling laws") {
  auto m = random_model(21, 4);
  auto small = solve_at(m, {1e-3, 0.0});
  for (std::size_t k = 0; k < m.size(); ++k)
    CHECK(-small[k].imag() / (1e-3 * m.weight(k)) == doctest::Approx(1.0).epsilon(0.01));

  auto ideal = fence(20);
  auto big = solve_at(ideal, {100.0, 0.0});
  auto ta = trapped_asymptotes(ideal);
  std::vector<cplx> sorted = big;
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) { return a.imag() > b.imag(); });
  sorted.pop_back();  // broad state
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  REQUIRE(sorted.size() == ta.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(sorted[i].real() == doctest::Approx(ta[i].position).epsilon(1e-3));
    CHECK(-100.0 * sorted[i].imag() / ta[i].coefficient == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("tracker agrees with the dense oracle") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    auto m = random_model(5 + 9 * static_cast<int>(seed), seed);
    for (double a : {0.05, 0.3, 1.0, 4.0}) {
      const CouplingParam k{a, seed % 2 ? 0.0 : 0.3 * a};
      std::vector<cplx> o;
      for (const auto& p : dense_oracle(m, k)) o.push_back(p.lambda);
      CHECK(multiset_distance(solve_at(m, k), o) < 1e-7);
    }
  }
}

TEST_CASE("decoupled levels are emitted exactly") {
  auto m = make_model({-2, -1, 0, 1, 2}, {1, 0, 1, 0, 1}, "gappy");
  auto t = track_trajectories(m, {0.1, 0.5, 1.0}, 0.0);
  for (std::size_t g = 0; g < 3; ++g) {
    CHECK(t.at(g, 1) == cplx(-1.0, 0.0));
    CHECK(t.at(g, 3) == cplx(1.0, 0.0));
  }
}

TEST_CASE("alpha = 0 grid point gives the bare levels") {
  auto m = random_model(9, 2);
  auto t = track_trajectories(m, {0.0, 0.1}, 0.0);
  for (std::size_t k = 0; k < t.states; ++k) CHECK(t.at(0, k) == cplx(m.energies[k], 0.0));
}

TEST_CASE("two-level continuation through the exceptional point") {
  auto m = make_model({-0.5, 0.5}, {1, 1}, "two-level");
  auto g = grid(0.02, 1.0, 50);
  auto t = track_trajectories(m, g, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = g[i];
    std::vector<cplx> expect;
    if (a < 0.5) {
      const double s = std::sqrt(0.25 - a * a);
      expect = {cplx(-s, -a), cplx(s, -a)};
    } else {
      const double s = std::sqrt(a * a - 0.25);
      expect = {cplx(0, -a + s), cplx(0, -a - s)};
    }
    CHECK(multiset_distance(row(t, i), expect) < 1e-7);
  }
  // one pair joins the axis, nothing leaves it
  int joins = 0;
  for (const auto& e : t.collisions)
    if (e.kind == CollisionKind::AxisJoin) {
      ++joins;
      CHECK(e.alpha == doctest::Approx(0.5).epsilon(1e-6));
    }
  CHECK(joins == 1);
}

TEST_CASE("disturbed fence keeps three roots on the axis between the collisions") {
  SpectrumSpec s;
  s.family = Family::DisturbedFence;
  s.n = 50;
  s.disturbance = -0.5;
  auto m = build_model(s);
  auto g = grid(0.01, 1.0, 100);
  auto t = track_trajectories(m, g, 0.0);
  double c1 = -1, c2 = -1;
  for (const auto& e : t.collisions) {
    if (e.kind == CollisionKind::AxisJoin && c1 < 0) c1 = e.alpha;
    if (e.kind == CollisionKind::AxisLeave && c1 > 0 && c2 < 0) c2 = e.alpha;
  }
  REQUIRE(c1 > 0);
  REQUIRE(c2 > c1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > c1 && g[i] < c2)) continue;
    int onAxis = 0;
    for (std::size_t k = 0; k < t.states; ++k) onAxis += std::abs(t.at(i, k).real()) < 1e-6;
    CHECK(onAxis == 3);
  }
}

TEST_CASE("labels stay continuous away from collisions") {
  auto m = random_model(31, 12);
  auto g = grid(0.01, 3.0, 300);
  auto t = track_trajectories(m, g, 0.0);
  const double spacing = m.mean_spacing();
  for (std::size_t i = 1; i < g.size(); ++i)
    for (std::size_t k = 0; k < t.states; ++k) {
      // the broad root moves fast, everyone else much less than a spacing per step
      if (std::abs(t.at(i, k).imag()) > 2.0) continue;
      CHECK(std::abs(t.at(i, k) - t.at(i - 1, k)) < spacing);
    }
}

TEST_CASE("complex coupling ray") {
  auto m = fence(20);
  const double phi = pi / 4;
  auto t = track_trajectories(m, {0.2, 0.4}, phi);
  const CouplingParam k = CouplingParam::on_ray(0.4, phi);
  std::vector<cplx> o;
  for (const auto& p : dense_oracle(m, k)) o.push_back(p.lambda);
  CHECK(multiset_distance(row(t, 1), o) < 1e-7);
  // trace: sum lambda = sum E - i kappa W
  cplx sum = 0;
  for (const cplx& l : row(t, 1)) sum += l;
  CHECK(std::abs(sum - cplx(0, -1) * k.kappa() * m.total_weight()) < 1e-8 * std::abs(k.kappa()) * m.total_weight());
}

TEST_CASE("grid validation") {
  auto m = fence(3);
  CHECK_THROWS_AS(track_trajectories(m, {}, 0.0), Error);
  CHECK_THROWS_AS(track_trajectories(m, {0.2, 0.1}, 0.0), Error);
  CHECK_THROWS_AS(track_trajectories(m, {-0.1, 0.1}, 0.0), Error);
  CHECK_THROWS_AS(track_trajectories(m, {0.1, 0.2}, pi / 2), Error);
  CHECK(seed_alpha_bound(m) == doctest::Approx(0.1));
}
