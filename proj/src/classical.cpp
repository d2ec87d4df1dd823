#include "nch/classical.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace nch::classical {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

}  // namespace

void validate(const CircleMeasure& mu, const Tolerance& tol) {
  if (mu.atoms.empty()) throw StructuralError("circle measure: no atoms");
  double total = 0.0;
  std::vector<double> reduced;
  for (const auto& a : mu.atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight) ||
        !std::isfinite(a.theta))
      throw StructuralError("circle measure: bad atom");
    total += a.weight;
    reduced.push_back(reduce_angle(a.theta));
  }
  if (std::abs(total - 1.0) > tol.scaled(1.0) * 1e2)
    throw StructuralError("circle measure: weights do not sum to one");
  for (size_t i = 0; i < reduced.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      double gap = std::abs(reduced[i] - reduced[j]);
      gap = std::min(gap, kTwoPi - gap);
      if (gap <= tol.scaled(1.0))
        throw StructuralError("circle measure: atoms coincide mod 2*pi");
    }
}

Complex herglotz_transform(const CircleMeasure& mu, Complex x) {
  if (std::abs(x) >= 1.0) {
    std::ostringstream os;
    os << "herglotz_transform: |x| = " << std::abs(x) << " is not < 1";
    throw DomainError(os.str());
  }
  Complex acc(0, 0);
  for (const auto& a : mu.atoms) {
    const Complex e = std::polar(1.0, a.theta);
    acc += a.weight * (Complex(1, 0) + e * x) / (Complex(1, 0) - e * x);
  }
  return acc;
}

std::vector<Complex> moments_of(const CircleMeasure& mu, int n_max) {
  if (n_max < 0) throw StructuralError("moments_of: negative order");
  std::vector<Complex> m(n_max + 1, Complex(0, 0));
  for (const auto& a : mu.atoms)
    for (int n = 0; n <= n_max; ++n)
      m[n] += a.weight * std::polar(1.0, n * a.theta);
  return m;
}

ToeplitzReport toeplitz_psd_check(const std::vector<Complex>& m,
                                  const Tolerance& tol) {
  if (m.empty()) throw StructuralError("toeplitz_psd_check: empty sequence");
  const Eigen::Index n = static_cast<Eigen::Index>(m.size());
  CMat t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index k = i - j;
      t(i, j) = k >= 0 ? m[static_cast<size_t>(k)]
                       : std::conj(m[static_cast<size_t>(-k)]);
    }
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (t + t.adjoint()),
                                         Eigen::EigenvaluesOnly);
  ToeplitzReport rep;
  rep.lambda_min = es.eigenvalues()(0);
  rep.ok = rep.lambda_min >= -tol.scaled(1.0);
  return rep;
}

freefunc::HerglotzRepresentation rep_from_measure(const CircleMeasure& mu,
                                                  const Tolerance& tol) {
  validate(mu, tol);
  const Eigen::Index s = static_cast<Eigen::Index>(mu.atoms.size());
  freefunc::HerglotzRepresentation rep;
  rep.alpha = UnitalEmbedding::full(1, s);
  rep.U = CMat::Zero(s, s);
  rep.V = CMat::Zero(s, 1);
  for (Eigen::Index j = 0; j < s; ++j) {
    rep.U(j, j) = std::polar(1.0, mu.atoms[static_cast<size_t>(j)].theta);
    rep.V(j, 0) = std::sqrt(mu.atoms[static_cast<size_t>(j)].weight);
  }
  return rep;
}

std::vector<Complex> taylor_moments_quadrature(const CircleMeasure& mu,
                                               int n_max, double radius,
                                               int nodes) {
  // a_n = (1/M r^n) sum_t h(r e^{2 pi i t / M}) e^{-2 pi i n t / M};
  // h = 1 + 2 sum m_n x^n, so m_n = a_n / 2 for n >= 1 and m_0 = a_0.
  std::vector<Complex> vals(nodes);
  for (int t = 0; t < nodes; ++t)
    vals[t] =
        herglotz_transform(mu, std::polar(radius, kTwoPi * t / nodes));
  std::vector<Complex> m(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    Complex acc(0, 0);
    for (int t = 0; t < nodes; ++t)
      acc += vals[t] * std::polar(1.0, -kTwoPi * n * t / nodes);
    acc /= static_cast<double>(nodes) * std::pow(radius, n);
    m[n] = (n == 0) ? acc : acc / 2.0;
  }
  return m;
}

}  // namespace nch::classical
