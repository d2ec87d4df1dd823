#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nch/classical.hpp"
#include "nch/matrixcore.hpp"
#include "nch/moments.hpp"
#include "nch/sampling.hpp"
#include "testutil.hpp"

using namespace nch;
using namespace nch::classical;

namespace {

CircleMeasure random_measure(sampling::Rng& rng, int max_atoms) {
  CircleMeasure mu;
  const int count = 1 + rng.uniform_int(0, max_atoms - 1);
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    Atom a;
    a.theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    a.weight = rng.uniform(0.05, 1.0);
    total += a.weight;
    mu.atoms.push_back(a);
  }
  for (auto& a : mu.atoms) a.weight /= total;
  return mu;
}

}  // namespace

TEST_CASE("herglotz_transform: point mass at 1") {
  CircleMeasure mu{{{0.0, 1.0}}};
  CHECK(std::abs(herglotz_transform(mu, Complex(0.5, 0)) - Complex(3, 0)) <=
        1e-14);
  CHECK(std::abs(herglotz_transform(mu, Complex(0, 0)) - Complex(1, 0)) <=
        1e-15);
  CHECK_THROWS_AS(herglotz_transform(mu, Complex(1.0, 0)), DomainError);
}

TEST_CASE("herglotz_transform: two symmetric atoms give (1+x^2)/(1-x^2)") {
  CircleMeasure mu{{{0.0, 0.5}, {std::numbers::pi, 0.5}}};
  const Complex h = herglotz_transform(mu, Complex(0.5, 0));
  CHECK(std::abs(h - Complex(5.0 / 3.0, 0)) <= 1e-14);
}

TEST_CASE("herglotz_transform: positivity on sampled disk points") {
  sampling::Rng rng(61);
  const auto mu = random_measure(rng, 6);
  for (int t = 0; t < 50; ++t) {
    const Complex x = std::polar(rng.uniform(0.0, 0.95), rng.uniform(0.0, 6.3));
    CHECK(herglotz_transform(mu, x).real() >= -1e-12);
  }
}

TEST_CASE("moments_of: point mass, parity measure, roots of unity") {
  CircleMeasure point{{{0.0, 1.0}}};
  for (const auto& m : moments_of(point, 6))
    CHECK(std::abs(m - Complex(1, 0)) <= 1e-15);

  CircleMeasure parity{{{0.0, 0.5}, {std::numbers::pi, 0.5}}};
  const auto pm = moments_of(parity, 6);
  for (int n = 0; n <= 6; ++n)
    CHECK(std::abs(pm[static_cast<size_t>(n)] -
                   Complex(n % 2 == 0 ? 1.0 : 0.0, 0)) <= 1e-14);

  const int order = 5;
  CircleMeasure roots;
  for (int j = 0; j < order; ++j)
    roots.atoms.push_back({2.0 * std::numbers::pi * j / order, 1.0 / order});
  const auto rm = moments_of(roots, order);
  for (int n = 1; n < order; ++n)
    CHECK(std::abs(rm[static_cast<size_t>(n)]) <= 1e-14);
  CHECK(std::abs(rm[order] - Complex(1, 0)) <= 1e-13);
}

TEST_CASE("moments_of matches the quadrature Taylor oracle") {
  sampling::Rng rng(62);
  for (int t = 0; t < 5; ++t) {
    const auto mu = random_measure(rng, 8);
    const auto direct = moments_of(mu, 8);
    const auto taylor = taylor_moments_quadrature(mu, 8);
    for (size_t n = 0; n < direct.size(); ++n)
      CHECK(std::abs(direct[n] - taylor[n]) <= 1e-8);
  }
}

TEST_CASE("toeplitz_psd_check: point mass, random measures, impossible moment") {
  std::vector<Complex> ones(8, Complex(1, 0));
  auto rep = toeplitz_psd_check(ones);
  CHECK(rep.ok);
  CHECK(std::abs(rep.lambda_min) <= 1e-12);

  sampling::Rng rng(63);
  for (int t = 0; t < 5; ++t) {
    const auto mu = random_measure(rng, 8);
    auto r = toeplitz_psd_check(moments_of(mu, 15));
    CHECK(r.ok);
    CHECK(r.lambda_min >= -1e-10);
  }

  std::vector<Complex> bad{Complex(1, 0), Complex(2, 0)};
  CHECK(!toeplitz_psd_check(bad).ok);
}

TEST_CASE("rep_from_measure: point mass and transform agreement") {
  CircleMeasure point{{{0.0, 1.0}}};
  const auto rep0 = rep_from_measure(point);
  CHECK(testutil::opdist(rep0.U, CMat::Identity(1, 1)) == 0.0);
  CHECK(testutil::opdist(rep0.V, CMat::Identity(1, 1)) == 0.0);

  CircleMeasure two{{{0.9, 0.3}, {4.1, 0.7}}};
  const auto rep = rep_from_measure(two);
  sampling::Rng rng(64);
  for (int t = 0; t < 50; ++t) {
    const Complex x = std::polar(rng.uniform(0.0, 0.9), rng.uniform(0.0, 6.3));
    const auto el = make_leveled({AlgebraKind::Full, 1}, 1,
                                 CMat::Constant(1, 1, x));
    CHECK(std::abs(freefunc::eval_herglotz(rep, el)(0, 0) -
                   herglotz_transform(two, x)) <= 1e-12);
  }
}

TEST_CASE("rep_from_measure: extracted moments reproduce circle moments") {
  CircleMeasure mu{{{0.5, 0.25}, {2.0, 0.35}, {5.1, 0.4}}};
  const auto rep = rep_from_measure(mu);
  auto eval = freefunc::make_evaluator(rep);
  // Letters all equal to 1: phi(u 1 u 1 ... ) = m_p.
  std::vector<CMat> ones(4, CMat::Identity(1, 1));
  const auto ext = moments::extract_moments(eval, ones, rep.alpha.algebra);
  const auto m = moments_of(mu, 4);
  for (int p = 1; p <= 4; ++p)
    CHECK(std::abs(ext.values.at({1, p})(0, 0) - m[static_cast<size_t>(p)]) <=
          1e-9);
}

TEST_CASE("measure validation rejects bad inputs") {
  CHECK_THROWS_AS(validate(CircleMeasure{}), StructuralError);
  CHECK_THROWS_AS(validate(CircleMeasure{{{0.0, 0.4}, {1.0, 0.4}}}),
                  StructuralError);
  CHECK_THROWS_AS(
      validate(CircleMeasure{{{0.0, 0.5}, {2.0 * std::numbers::pi, 0.5}}}),
      StructuralError);
}
