#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

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

std::vector<EigenSolution> all_vectors(const ModelInstance& m, const CouplingParam& k) {
  std::vector<EigenSolution> out;
  for (const cplx& l : solve_at(m, k)) out.push_back(eigenvector(m, k, l));
  return out;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Validation;
}

}  // namespace

TEST_CASE("bilinear normalisation and bounds") {
  auto m = random_model(17, 3);
  for (double a : {0.01, 0.2, 0.7, 3.0}) {
    const CouplingParam k{a, 0.0};
    for (const auto& s : all_vectors(m, k)) {
      cplx sq = 0;
      double abs2 = 0;
      for (const cplx& c : s.coeffs) {
        sq += c * c;
        abs2 += std::norm(c);
      }
      CHECK(std::abs(sq - 1.0) < 1e-12);
      CHECK(s.normSq == doctest::Approx(abs2).epsilon(1e-12));
      CHECK(s.normSq >= 1.0 - 1e-12);
      CHECK(s.npc >= 1.0 / m.size() - 1e-12);
      CHECK(s.npc <= 1.0 + 1e-12);
      auto metrics = eigen_metrics(m, k, s.lambda);
      CHECK(metrics.coeffs.empty());
      CHECK(metrics.normSq == doctest::Approx(s.normSq).epsilon(1e-12));
      CHECK(metrics.npc == doctest::Approx(s.npc).epsilon(1e-12));
    }
  }
}

TEST_CASE("bi-orthogonality") {
  auto m = random_model(25, 8);
  const CouplingParam k{0.45, 0.05};
  auto v = all_vectors(m, k);
  double worst = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t l = i + 1; l < v.size(); ++l) {
      cplx s = 0;
      for (std::size_t j = 0; j < m.size(); ++j) s += v[i].coeffs[j] * v[l].coeffs[j];
      worst = std::max(worst, std::abs(s));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("dense residual of the rebuilt eigenvectors") {
  auto m = random_model(20, 5);
  const CouplingParam k{0.6, 0.0};
  const cplx i{0, 1};
  double hnorm = 0;
  for (double e : m.energies) hnorm = std::max(hnorm, std::abs(e));
  hnorm += std::abs(k.kappa()) * m.total_weight();
  for (const auto& s : all_vectors(m, k)) {
    cplx va = 0;
    for (std::size_t j = 0; j < m.size(); ++j) va += m.couplings[j] * s.coeffs[j];
    double res = 0, an = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      const cplx r = (m.energies[j] - s.lambda) * s.coeffs[j] - i * k.kappa() * m.couplings[j] * va;
      res += std::norm(r);
      an += std::norm(s.coeffs[j]);
    }
    CHECK(std::sqrt(res / an) <= 1e-8 * hnorm);
  }
}

TEST_CASE("weak and strong coupling limits") {
  auto m = fence(50);
  for (double a : {1e-3, 100.0}) {
    auto v = all_vectors(m, {a, 0.0});
    std::size_t broad = 0;
    for (std::size_t s = 0; s < v.size(); ++s)
      if (v[s].lambda.imag() < v[broad].lambda.imag()) broad = s;
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (a > 1 && s == broad) continue;
      CHECK(v[s].normSq <= 1.01);
    }
    std::vector<EigenSolution> copy = v;
    CHECK(observables(copy).B < 1.05);
  }
  auto weak = all_vectors(m, {1e-6, 0.0});
  for (const auto& s : weak) CHECK(s.npc == doctest::Approx(1.0 / 101).epsilon(1e-3));
}

TEST_CASE("kappa = 0 needs a bare level") {
  auto m = fence(3);
  auto s = eigenvector(m, {0.0, 0.0}, 1.0);
  CHECK(s.normSq == 1.0);
  CHECK(s.npc == doctest::Approx(1.0 / 7));
  CHECK(s.coeffs[4] == cplx(1.0, 0.0));
  CHECK(code_of([&] { eigenvector(m, {0.0, 0.0}, 0.5); }) == ErrorCode::NotAnEigenvalue);
  CHECK(code_of([&] { eigenvector(m, {0.3, 0.0}, cplx(0.5, -0.3)); }) == ErrorCode::NotAnEigenvalue);
}

TEST_CASE("exceptional point is self-orthogonal") {
  auto m = make_model({-0.5, 0.5}, {1, 1}, "two-level");
  CHECK(code_of([&] { eigenvector(m, {0.5, 0.0}, cplx(0, -0.5)); }) == ErrorCode::SelfOrthogonal);
  // nearby the norm is large but finite
  const double a = 0.49;
  auto s = eigenvector(m, {a, 0.0}, cplx(std::sqrt(0.25 - a * a), -a));
  CHECK(s.normSq > 3.0);
}

TEST_CASE("equal mixing gives npc = 1") {
  // above the exceptional point both two-level states mix the pair equally
  auto m = make_model({-0.5, 0.5}, {1, 1}, "two-level");
  for (const auto& s : all_vectors(m, {0.8, 0.0})) CHECK(s.npc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observables") {
  auto m = fence(10);
  std::vector<EigenSolution> bare;
  for (std::size_t k = 0; k < m.size(); ++k) bare.push_back(eigenvector(m, {0.0, 0.0}, m.energies[k]));
  CHECK(observables(bare).B == 1.0);

  auto v = all_vectors(m, {1.0 / pi, 0.0});
  auto o = observables(v);
  CHECK(o.B >= 1.0);
  CHECK(o.norms.size() == m.size());
  CHECK(o.npcs.size() == m.size());
  double mean = 0;
  for (double n : o.norms) mean += n;
  CHECK(o.B == doctest::Approx(mean / m.size()));
  CHECK(partial_b(v, {0, 1}) == doctest::Approx((v[0].normSq + v[1].normSq) / 2));
}

TEST_CASE("dense oracle") {
  auto one = make_model({0.0}, {1.0}, "single");
  auto o1 = dense_oracle(one, {0.3, 0.0});
  REQUIRE(o1.size() == 1);
  CHECK(std::abs(o1[0].lambda - cplx(0, -0.3)) < 1e-14);

  auto two = make_model({-0.5, 0.5}, {1, 1}, "two-level");
  std::vector<cplx> l;
  for (const auto& p : dense_oracle(two, {0.4, 0.0})) l.push_back(p.lambda);
  CHECK(multiset_distance(l, {cplx(0.3, -0.4), cplx(-0.3, -0.4)}) < 1e-12);

  SpectrumSpec s;
  s.family = Family::GoeUnfolded;
  s.n = 5;
  s.seed = 42;
  auto g = build_model(s);
  for (double a : {0.1, 0.7, 2.0}) {
    std::vector<cplx> o;
    auto pairs = dense_oracle(g, {a, 0.0});
    for (const auto& p : pairs) o.push_back(p.lambda);
    CHECK(multiset_distance(solve_at(g, {a, 0.0}), o) < 1e-7);
    // oracle vectors agree with the closed form up to sign
    for (const auto& p : pairs) {
      auto e = eigenvector(g, {a, 0.0}, p.lambda);
      cplx dot = 0;
      for (std::size_t j = 0; j < g.size(); ++j) dot += e.coeffs[j] * p.coeffs[j];
      CHECK(std::abs(std::abs(dot) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("multiset matching") {
  std::vector<cplx> a{{0, 0}, {1, 0}, {2, 0}};
  std::vector<cplx> b{{2.1, 0}, {0.1, 0}, {0.9, 0}};
  auto m = match_multisets(a, b);
  CHECK(m == std::vector<std::size_t>{1, 2, 0});
  CHECK(multiset_distance(a, b) == doctest::Approx(0.1));
  std::vector<cplx> c{{0, 0}, {1, 0}};
  std::vector<cplx> d{{0.6, 0}, {-0.5, 0}};
  CHECK(match_multisets(c, d) == std::vector<std::size_t>{1, 0});
}
