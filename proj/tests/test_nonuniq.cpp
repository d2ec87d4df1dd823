#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nch/batch.hpp"
#include "nch/freefunc.hpp"
#include "nch/matrixcore.hpp"
#include "nch/moments.hpp"
#include "nch/nonuniq.hpp"
#include "nch/sampling.hpp"
#include "testutil.hpp"

using namespace nch;
using namespace nch::nonuniq;
using matrixcore::opnorm;
using moments::direct_moment;
using moments::Letter;

namespace {

std::pair<freefunc::HerglotzRepresentation, freefunc::HerglotzRepresentation>
standard_haar_pair(int n) {
  CMat rho1 = CMat::Zero(2, 2), rho2 = CMat::Zero(2, 2);
  rho1(0, 0) = 1.0;
  rho2(1, 1) = 1.0;
  return haar_pair_states({AlgebraKind::Full, 2}, rho1, rho2, n);
}

}  // namespace

TEST_CASE("haar pair: functions sit within the geometric tail of I") {
  const int n = 6;
  auto pair = standard_haar_pair(n);
  freefunc::validate(pair.first);
  freefunc::validate(pair.second);
  sampling::Rng rng(71);
  const double bound = 2.0 * std::pow(0.5, n) / (1.0 - 0.5);
  for (int t = 0; t < 8; ++t) {
    const auto x = sampling::random_ball_point(
        rng, pair.first.alpha.algebra, 1 + t % 2, 0.2, 0.5);
    const CMat g = freefunc::eval_herglotz(pair.first, x);
    CHECK(opnorm(g - CMat::Identity(g.rows(), g.cols())) <= bound);
  }
}

TEST_CASE("haar pair: alternating moments vanish, balanced words distinguish") {
  auto pair = standard_haar_pair(5);
  sampling::Rng rng(72);
  std::vector<CMat> letters{sampling::gaussian_matrix(rng, 2, 2),
                            sampling::gaussian_matrix(rng, 2, 2)};
  const moments::Word alt{Letter::u(), Letter::alg(0), Letter::u(),
                          Letter::alg(1)};
  CHECK(opnorm(direct_moment(pair.first, letters, alt)) <= 1e-12);
  CHECK(opnorm(direct_moment(pair.second, letters, alt)) <= 1e-12);

  CMat b = CMat::Zero(2, 2);
  b(0, 0) = 1.0;
  const moments::Word balanced{Letter::ustar(), Letter::alg(0), Letter::u()};
  const CMat m1 = direct_moment(pair.first, {b}, balanced);
  const CMat m2 = direct_moment(pair.second, {b}, balanced);
  // trace(rho_1 b) = 1, trace(rho_2 b) = 0.
  CHECK(testutil::opdist(m1, CMat::Identity(2, 2)) <= 1e-12);
  CHECK(opnorm(m2) <= 1e-12);
  CHECK(opnorm(m1 - m2) >= 0.1);
}

TEST_CASE("haar pair: coinciding states are rejected") {
  CMat rho = CMat::Identity(2, 2) * 0.5;
  CHECK_THROWS_WITH_AS(haar_pair_states({AlgebraKind::Full, 2}, rho, rho, 4),
                       doctest::Contains("states coincide"), StructuralError);
}

TEST_CASE("crossed product: covariance U alpha(b) U* = alpha(psi(b))") {
  CMat q = CMat::Zero(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = -1.0;
  const auto psi = AlgebraMap::inner(q);
  const auto rep = crossed_product_expectation(psi, 6);
  freefunc::validate(rep);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      CMat unit = CMat::Zero(2, 2);
      unit(r, c) = 1.0;
      const CMat lhs = rep.U * rep.alpha.apply(unit) * rep.U.adjoint();
      const CMat rhs = rep.alpha.apply(psi.apply(unit));
      CHECK(testutil::opdist(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("crossed product: shift arithmetic of plain u powers") {
  const int n = 5;
  const auto rep = crossed_product_expectation(
      AlgebraMap::identity({AlgebraKind::Full, 2}), n);
  for (int p = 1; p < n; ++p) {
    moments::Word w(static_cast<size_t>(p), Letter::u());
    CHECK(opnorm(direct_moment(rep, {}, w)) <= 1e-13);
  }
  moments::Word wn(static_cast<size_t>(n), Letter::u());
  CHECK(testutil::opdist(direct_moment(rep, {}, wn), CMat::Identity(2, 2)) <=
        1e-13);
}

TEST_CASE("crossed product: phi(u b u*) = psi(b), distinct for distinct psi") {
  const int n = 6;
  CMat q = CMat::Identity(2, 2);
  q(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi / n);
  const auto psi1 = AlgebraMap::identity({AlgebraKind::Full, 2});
  const auto psi2 = AlgebraMap::inner(q);
  const auto rep1 = crossed_product_expectation(psi1, n);
  const auto rep2 = crossed_product_expectation(psi2, n);

  sampling::Rng rng(73);
  const CMat b = sampling::gaussian_matrix(rng, 2, 2);
  const moments::Word word{Letter::u(), Letter::alg(0), Letter::ustar()};
  CHECK(testutil::opdist(direct_moment(rep1, {b}, word), psi1.apply(b)) <=
        1e-12);
  CHECK(testutil::opdist(direct_moment(rep2, {b}, word), psi2.apply(b)) <=
        1e-12);

  CMat offdiag = CMat::Zero(2, 2);
  offdiag(0, 1) = 1.0;
  CHECK(opnorm(direct_moment(rep1, {offdiag}, word) -
               direct_moment(rep2, {offdiag}, word)) >= 0.1);
}

TEST_CASE("crossed product: psi^N != id is rejected") {
  CMat q = CMat::Identity(2, 2);
  q(1, 1) = std::polar(1.0, 0.3);
  CHECK_THROWS_AS(crossed_product_expectation(AlgebraMap::inner(q), 4),
                  StructuralError);
}

TEST_CASE("crossed product over a diagonal algebra: cyclic permutation") {
  const auto psi = AlgebraMap::coordinate(3, {1, 2, 0});
  const auto rep = crossed_product_expectation(psi, 3);
  freefunc::validate(rep);
  CMat b = CMat::Zero(3, 3);
  b(0, 0) = 0.2;
  b(1, 1) = 0.5;
  b(2, 2) = -0.7;
  const moments::Word word{Letter::u(), Letter::alg(0), Letter::ustar()};
  CHECK(testutil::opdist(direct_moment(rep, {b}, word), psi.apply(b)) <= 1e-13);
}

TEST_CASE("shift endomorphism: coordinate bookkeeping of constant maps") {
  const int n = 4;
  const auto psi = AlgebraMap::coordinate(3, {0, 0, 0});  // constant to 0
  const auto rep = shift_endomorphism_expectation(psi, n);
  freefunc::validate(rep);

  CMat e0 = CMat::Zero(3, 3), e1 = CMat::Zero(3, 3);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  const moments::Word word{Letter::ustar(), Letter::alg(0), Letter::u()};
  // psi(e_0) = I, psi(e_1) = 0.
  CHECK(testutil::opdist(direct_moment(rep, {e0}, word),
                         CMat::Identity(3, 3)) <= 1e-13);
  CHECK(opnorm(direct_moment(rep, {e1}, word)) <= 1e-13);
}

TEST_CASE("shift endomorphism: mixed moments vanish through order 2N") {
  const int n = 3;
  const auto psi = AlgebraMap::coordinate(2, {1, 1});
  const auto rep = shift_endomorphism_expectation(psi, n);
  sampling::Rng rng(74);
  std::vector<CMat> letters;
  for (int i = 0; i < 2; ++i)
    letters.push_back(
        sampling::random_ball_point(rng, psi.algebra, 1, 0.3, 0.9).matrix);
  for (int p = 1; p <= 2 * n; ++p) {
    moments::Word w;
    for (int i = 0; i < p; ++i) {
      w.push_back(Letter::u());
      w.push_back(Letter::alg(i % 2));
    }
    CHECK(opnorm(direct_moment(rep, letters, w)) <= 1e-12);
  }
}

TEST_CASE("shift endomorphism: rejects full algebras") {
  CHECK_THROWS_AS(
      shift_endomorphism_expectation(
          AlgebraMap::inner(CMat::Identity(2, 2)), 3),
      StructuralError);
}

TEST_CASE("non-injectivity witness: moment gap vs function agreement") {
  for (int n : {4, 8}) {
    auto pair = standard_haar_pair(n);
    sampling::Rng rng(75);
    std::vector<LeveledElement> points;
    for (int i = 0; i < 12; ++i)
      points.push_back(sampling::random_ball_point(
          rng, pair.first.alpha.algebra, 1 + i % 2, 0.25, 0.5));
    const auto devs = batch::pair_deviation_many(pair.first, pair.second,
                                                 points, batch::Exec::serial);
    for (double d : devs) CHECK(d <= 4.0 * std::pow(2.0, -n));

    CMat b = CMat::Zero(2, 2);
    b(0, 0) = 1.0;
    const moments::Word balanced{Letter::u(), Letter::alg(0), Letter::ustar()};
    CHECK(opnorm(direct_moment(pair.first, {b}, balanced) -
                 direct_moment(pair.second, {b}, balanced)) >= 0.1);
  }
}

TEST_CASE("generated representations satisfy regularity") {
  const auto rep = crossed_product_expectation(
      AlgebraMap::identity({AlgebraKind::Full, 2}), 4);
  const CMat h0 = freefunc::eval_herglotz(rep, zero_element(rep.alpha.algebra, 1));
  CHECK(testutil::opdist(h0, CMat::Identity(2, 2)) <= 1e-12);

  auto pair = standard_haar_pair(4);
  const CMat g0 =
      freefunc::eval_herglotz(pair.first, zero_element({AlgebraKind::Full, 2}, 1));
  CHECK(testutil::opdist(g0, CMat::Identity(2, 2)) <= 1e-12);
}
