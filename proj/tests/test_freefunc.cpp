#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nch/freefunc.hpp"
#include "nch/matrixcore.hpp"
#include "nch/sampling.hpp"
#include "testutil.hpp"

using namespace nch;
using freefunc::HerglotzRepresentation;
using matrixcore::min_real_eig;
using matrixcore::opnorm;

TEST_CASE("embed: zero maps to zero, identity to identity") {
  sampling::Rng rng(1);
  const auto alpha = UnitalEmbedding::full(2, 2, sampling::random_unitary(rng, 4));
  const AlgebraDescriptor alg{AlgebraKind::Full, 2};
  CHECK(opnorm(embed(alpha, zero_element(alg, 2))) == 0.0);
  const auto eye = make_leveled(alg, 2, CMat::Identity(4, 4));
  CHECK(testutil::opdist(embed(alpha, eye), CMat::Identity(8, 8)) <= 1e-12);
}

TEST_CASE("embed: trivial full embedding is the identity map") {
  const auto alpha = UnitalEmbedding::full(3, 1);
  sampling::Rng rng(2);
  const auto x = sampling::random_ball_point(rng, {AlgebraKind::Full, 3}, 2);
  CHECK(testutil::opdist(embed(alpha, x), x.matrix) == 0.0);
}

TEST_CASE("embed: diagonal projections with unequal multiplicities") {
  // P1 = diag(1,0,0), P2 = diag(0,1,1); diag(a, b) -> diag(a, b, b).
  const auto alpha = UnitalEmbedding::diagonal_canonical({1, 2});
  CMat x = CMat::Zero(2, 2);
  x(0, 0) = Complex(0.3, 0.1);
  x(1, 1) = Complex(-0.2, 0.4);
  const auto el = make_leveled({AlgebraKind::Diagonal, 2}, 1, x);
  CMat expected = CMat::Zero(3, 3);
  expected(0, 0) = x(0, 0);
  expected(1, 1) = x(1, 1);
  expected(2, 2) = x(1, 1);
  CHECK(testutil::opdist(embed(alpha, el), expected) <= 1e-14);
}

TEST_CASE("embed: multiplicative and star-preserving on random products") {
  sampling::Rng rng(3);
  const auto alpha = UnitalEmbedding::full(2, 3, sampling::random_unitary(rng, 6));
  const AlgebraDescriptor alg{AlgebraKind::Full, 2};
  for (int t = 0; t < 10; ++t) {
    const auto a = sampling::random_ball_point(rng, alg, 1);
    const auto b = sampling::random_ball_point(rng, alg, 1);
    const auto ab = make_leveled(alg, 1, a.matrix * b.matrix);
    CHECK(testutil::opdist(embed(alpha, ab),
                           embed(alpha, a) * embed(alpha, b)) <= 1e-12);
    const auto astar = make_leveled(alg, 1, a.matrix.adjoint());
    CHECK(testutil::opdist(embed(alpha, astar),
                           embed(alpha, a).adjoint()) <= 1e-12);
  }
}

TEST_CASE("embed: algebra mismatch is a structural error") {
  const auto alpha = UnitalEmbedding::full(2, 1);
  CHECK_THROWS_AS(embed(alpha, zero_element({AlgebraKind::Full, 3}, 1)),
                  StructuralError);
}

TEST_CASE("eval_herglotz: h(0) = I") {
  sampling::Rng rng(4);
  const auto rep = testutil::random_full_rep(rng, 2, 2, 2);
  const CMat h0 = freefunc::eval_herglotz(rep, zero_element(rep.alpha.algebra, 1));
  CHECK(testutil::opdist(h0, CMat::Identity(2, 2)) <= 1e-12);
}

TEST_CASE("eval_herglotz: single-atom scalar kernel") {
  const double theta = 0.7;
  const auto rep = testutil::atom_rep(theta);
  const Complex e = std::polar(1.0, theta);
  for (Complex x : {Complex(0.5, 0), Complex(-0.3, 0.2), Complex(0.1, -0.6)}) {
    const auto el = make_leveled({AlgebraKind::Full, 1}, 1,
                                 CMat::Constant(1, 1, x));
    const Complex expected = (1.0 + e * x) / (1.0 - e * x);
    CHECK(std::abs(freefunc::eval_herglotz(rep, el)(0, 0) - expected) <= 1e-13);
  }
}

TEST_CASE("eval_herglotz: two-point mass partial fractions") {
  // d = 1, m = 2, U = diag(1, -1), V = (1, 1)/sqrt(2): h(x) = (1+x^2)/(1-x^2).
  HerglotzRepresentation rep;
  rep.alpha = UnitalEmbedding::full(1, 2);
  rep.U = CMat::Zero(2, 2);
  rep.U(0, 0) = 1.0;
  rep.U(1, 1) = -1.0;
  rep.V = CMat::Constant(2, 1, Complex(1.0 / std::sqrt(2.0), 0));
  const auto el = make_leveled({AlgebraKind::Full, 1}, 1,
                               CMat::Constant(1, 1, Complex(0.5, 0)));
  CHECK(std::abs(freefunc::eval_herglotz(rep, el)(0, 0) - Complex(5.0 / 3.0, 0)) <=
        1e-13);
}

TEST_CASE("eval_herglotz: rejects non-contractions") {
  const auto rep = testutil::atom_rep(0.0);
  const auto el = make_leveled({AlgebraKind::Full, 1}, 1,
                               CMat::Constant(1, 1, Complex(1.0, 0)));
  CHECK_THROWS_WITH_AS(freefunc::eval_herglotz(rep, el),
                       doctest::Contains("not a strict contraction"),
                       DomainError);
}

TEST_CASE("eval_herglotz: positivity and regularity over random samples") {
  sampling::Rng rng(5);
  const auto rep = testutil::random_full_rep(rng, 2, 2, 2);
  for (int t = 0; t < 50; ++t) {
    const int level = 1 + t % 3;
    const auto x = sampling::random_ball_point(rng, rep.alpha.algebra, level);
    CHECK(min_real_eig(freefunc::eval_herglotz(rep, x)) >= -1e-9);
  }
}

TEST_CASE("eval with offset: h(0) = I + iT") {
  sampling::Rng rng(6);
  auto rep = testutil::random_full_rep(rng, 1, 2, 2);
  rep.offset_T = sampling::random_hermitian(rng, 2);
  const CMat h0 = freefunc::eval_herglotz(rep, zero_element(rep.alpha.algebra, 1));
  const CMat expected =
      CMat::Identity(2, 2) + Complex(0, 1) * (*rep.offset_T);
  CHECK(testutil::opdist(h0, expected) <= 1e-12);
}

TEST_CASE("cayley: fixed scalar values") {
  CHECK(opnorm(freefunc::cayley_to_schur(CMat::Identity(2, 2))) <= 1e-14);
  const CMat three = CMat::Constant(1, 1, Complex(3, 0));
  CHECK(std::abs(freefunc::cayley_to_schur(three)(0, 0) - Complex(0.5, 0)) <=
        1e-14);
  const CMat half = CMat::Constant(1, 1, Complex(0.5, 0));
  CHECK(std::abs(freefunc::cayley_to_herglotz(half)(0, 0) - Complex(3, 0)) <=
        1e-14);
  CHECK(testutil::opdist(freefunc::cayley_to_herglotz(CMat::Zero(2, 2)),
                         CMat::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("cayley: contractivity and involution on random Re-positive inputs") {
  sampling::Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    // H = PSD + i Hermitian has Re H >= 0.
    const CMat g = sampling::gaussian_matrix(rng, 3, 3);
    const CMat h = g * g.adjoint() + Complex(0, 1) * sampling::random_hermitian(rng, 3);
    const CMat f = freefunc::cayley_to_schur(h);
    // Contractivity oracle: smallest eigenvalue of I - F*F.
    CHECK(min_real_eig(CMat::Identity(3, 3) - f.adjoint() * f) >= -1e-10);
    CHECK(testutil::opdist(freefunc::cayley_to_herglotz(f), h) <= 1e-10 * (1 + opnorm(h)));
  }
}

TEST_CASE("cayley: singular pivots are domain errors") {
  CHECK_THROWS_AS(freefunc::cayley_to_schur(-CMat::Identity(2, 2)), DomainError);
  CHECK_THROWS_AS(freefunc::cayley_to_herglotz(CMat::Identity(2, 2)), DomainError);
}

TEST_CASE("check_free_axioms: residuals stay at rounding level") {
  sampling::Rng rng(8);
  const auto rep = testutil::random_full_rep(rng, 2, 2, 2);
  const auto report = freefunc::check_free_axioms(rep, 20, 99);
  CHECK(report.direct_sum_residual <= 1e-9);
  CHECK(report.intertwine_residual <= 1e-9);
  CHECK(report.similarity_residual <= 1e-9);
}

TEST_CASE("check_free_axioms: direct sum of X with itself") {
  sampling::Rng rng(9);
  const auto rep = testutil::random_full_rep(rng, 2, 1, 1);
  const auto x = sampling::random_ball_point(rng, rep.alpha.algebra, 1);
  const auto xx = direct_sum(x, x);
  const CMat hx = freefunc::eval_herglotz(rep, x);
  const CMat hxx = freefunc::eval_herglotz(rep, xx);
  CMat block = CMat::Zero(hxx.rows(), hxx.cols());
  block.topLeftCorner(hx.rows(), hx.cols()) = hx;
  block.bottomRightCorner(hx.rows(), hx.cols()) = hx;
  CHECK(testutil::opdist(hxx, block) <= 1e-10);
}

TEST_CASE("truncated geometric expansion matches the resolvent form") {
  sampling::Rng rng(10);
  const auto rep = testutil::random_full_rep(rng, 2, 2, 2);
  auto x = sampling::random_ball_point(rng, rep.alpha.algebra, 2);
  const double nrm = opnorm(embed(rep.alpha, x));
  x.matrix *= 0.5 / nrm * 0.999;
  const CMat h = freefunc::eval_herglotz(rep, x);
  for (int order : {4, 8}) {
    const CMat approx = freefunc::eval_herglotz_truncated(rep, x, order);
    CHECK(testutil::opdist(h, approx) <= 4.0 * std::pow(2.0, -order));
  }
}

TEST_CASE("regularize: identity and scalar normalizations") {
  const auto rep = testutil::atom_rep(0.3);
  auto base = freefunc::make_evaluator(rep);

  auto h1 = freefunc::regularize(CMat::Identity(1, 1), base);
  const auto x = make_leveled({AlgebraKind::Full, 1}, 1,
                              CMat::Constant(1, 1, Complex(0.4, 0.1)));
  CHECK(std::abs(h1(x)(0, 0) - base(x)(0, 0)) <= 1e-13);

  // h0 = 2I normalizes to h/2.
  auto doubled = [&](const LeveledElement& p) { return CMat(2.0 * base(p)); };
  auto h2 = freefunc::regularize(CMat::Constant(1, 1, Complex(2, 0)), doubled);
  CHECK(std::abs(h2(x)(0, 0) - base(x)(0, 0)) <= 1e-13);
}

TEST_CASE("regularize: matrix normalization restores h(0) = I") {
  sampling::Rng rng(11);
  auto rep = testutil::random_full_rep(rng, 1, 3, 2);
  // Force a non-regular function: h0 = S + iT with S = diag(1,4), T = diag(0,1).
  CMat scale = CMat::Zero(2, 2);
  scale(0, 0) = 1.0;
  scale(1, 1) = 2.0;
  auto skewed = [&, scale](const LeveledElement& p) {
    const CMat s_amp = amplify(scale, p.level);
    CMat t = CMat::Zero(2, 2);
    t(1, 1) = 1.0;
    return CMat(s_amp * freefunc::eval_herglotz(rep, p) * s_amp +
                Complex(0, 1) * amplify(t, p.level));
  };
  CMat h0 = CMat::Zero(2, 2);
  h0(0, 0) = 1.0;
  h0(1, 1) = Complex(4.0, 1.0);
  auto normalized = freefunc::regularize(h0, skewed);
  const CMat at_zero = normalized(zero_element(rep.alpha.algebra, 1));
  CHECK(testutil::opdist(at_zero, CMat::Identity(2, 2)) <= 1e-12);
  // Re-positivity survives the congruence.
  for (int t = 0; t < 10; ++t) {
    const auto p = sampling::random_ball_point(rng, rep.alpha.algebra, 1);
    CHECK(min_real_eig(normalized(p)) >= -1e-9);
  }
}

TEST_CASE("regularize: degenerate real part is rejected") {
  auto base = freefunc::make_evaluator(testutil::atom_rep(0.0));
  CHECK_THROWS_WITH_AS(freefunc::regularize(CMat::Zero(1, 1), base),
                       doctest::Contains("degenerate real part"), DomainError);
}
