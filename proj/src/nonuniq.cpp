#include "nch/nonuniq.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>

#include "nch/matrixcore.hpp"

namespace nch::nonuniq {

using matrixcore::opnorm;

AlgebraMap AlgebraMap::inner(const CMat& q) {
  AlgebraMap psi;
  psi.algebra = {AlgebraKind::Full, static_cast<int>(q.rows())};
  if (q.rows() != q.cols())
    throw StructuralError("AlgebraMap::inner: conjugator not square");
  psi.conjugator = q;
  return psi;
}

AlgebraMap AlgebraMap::coordinate(int k, std::vector<int> sigma) {
  if (static_cast<int>(sigma.size()) != k)
    throw StructuralError("AlgebraMap::coordinate: self-map size != k");
  for (int v : sigma)
    if (v < 0 || v >= k)
      throw StructuralError("AlgebraMap::coordinate: value out of range");
  AlgebraMap psi;
  psi.algebra = {AlgebraKind::Diagonal, k};
  psi.self_map = std::move(sigma);
  return psi;
}

AlgebraMap AlgebraMap::identity(const AlgebraDescriptor& alg) {
  if (alg.kind == AlgebraKind::Full)
    return inner(CMat::Identity(alg.k, alg.k));
  std::vector<int> sigma(alg.k);
  for (int i = 0; i < alg.k; ++i) sigma[i] = i;
  return coordinate(alg.k, std::move(sigma));
}

CMat AlgebraMap::apply(const CMat& b) const {
  const int k = algebra.k;
  if (b.rows() != k || b.cols() != k)
    throw StructuralError("AlgebraMap: element has wrong size");
  if (algebra.kind == AlgebraKind::Full)
    return conjugator * b * conjugator.adjoint();
  CMat out = CMat::Zero(k, k);
  for (int l = 0; l < k; ++l) out(l, l) = b(self_map[l], self_map[l]);
  return out;
}

CMat AlgebraMap::iterate(const CMat& b, int times) const {
  CMat out = b;
  for (int i = 0; i < times; ++i) out = apply(out);
  return out;
}

bool AlgebraMap::is_automorphism() const {
  if (algebra.kind == AlgebraKind::Full) return true;
  std::vector<bool> hit(self_map.size(), false);
  for (int v : self_map) hit[v] = true;
  for (bool h : hit)
    if (!h) return false;
  return true;
}

void validate_truncation(int n) {
  if (n < 2) throw StructuralError("truncation order must be >= 2");
}

namespace {

// Cyclic down-shift on C^n: S e_i = e_{i+1 mod n}.
CMat cyclic_shift(Eigen::Index n) {
  CMat s = CMat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) s((i + 1) % n, i) = Complex(1, 0);
  return s;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Purification of a density matrix: a unit vector xi in C^k (x) C^k with
// <xi, (b (x) I) xi> = trace(rho b).
CVec purification(const CMat& rho, const Tolerance& tol) {
  const Eigen::Index k = rho.rows();
  auto psd = matrixcore::validate_structure(
      rho, matrixcore::StructureKind::psd, tol);
  if (!psd.ok || std::abs(rho.trace().real() - 1.0) > tol.scaled(1.0) ||
      std::abs(rho.trace().imag()) > tol.scaled(1.0))
    throw StructuralError("haar_pair_states: not a density matrix");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()));
  CVec xi = CVec::Zero(k * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double lambda = std::max(0.0, es.eigenvalues()(i));
    CVec basis = CVec::Zero(k);
    basis(i) = Complex(1, 0);
    xi += std::sqrt(lambda) * kron(es.eigenvectors().col(i), basis);
  }
  xi /= xi.norm();
  return xi;
}

freefunc::HerglotzRepresentation haar_rep(const AlgebraDescriptor& alg,
                                          const CMat& rho, int n,
                                          const Tolerance& tol) {
  const int k = alg.k;
  const Eigen::Index s = static_cast<Eigen::Index>(k) * n * k;
  const CVec xi = purification(rho, tol);

  freefunc::HerglotzRepresentation rep;
  if (alg.kind == AlgebraKind::Full) {
    rep.alpha = UnitalEmbedding::full(k, s);  // alpha(b) = b (x) I_s
  } else {
    rep.alpha = UnitalEmbedding::diagonal_canonical(
        std::vector<Eigen::Index>(k, s));
  }
  rep.U = kron(CMat::Identity(k * k, k * k),
               kron(cyclic_shift(n), CMat::Identity(k, k)));
  CMat e0 = CMat::Zero(n, 1);
  e0(0, 0) = Complex(1, 0);
  rep.V = kron(kron(CMat(xi), e0), CMat::Identity(k, k));
  return rep;
}

}  // namespace

std::pair<freefunc::HerglotzRepresentation, freefunc::HerglotzRepresentation>
haar_pair_states(const AlgebraDescriptor& alg, const CMat& rho1,
                 const CMat& rho2, int n, const Tolerance& tol) {
  validate_truncation(n);
  if (alg.k < 2)
    throw StructuralError("haar_pair_states: algebra must not be C");
  if (opnorm(rho1 - rho2) <= tol.scaled(1.0))
    throw StructuralError("haar_pair_states: states coincide");
  return {haar_rep(alg, rho1, n, tol), haar_rep(alg, rho2, n, tol)};
}

freefunc::HerglotzRepresentation crossed_product_expectation(
    const AlgebraMap& psi, int n, const Tolerance& tol) {
  validate_truncation(n);
  if (!psi.is_automorphism())
    throw StructuralError("crossed_product_expectation: psi not bijective");
  const int k = psi.algebra.k;

  // psi^N = id, checked on matrix units.
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      CMat unit = CMat::Zero(k, k);
      unit(r, c) = Complex(1, 0);
      if (psi.algebra.kind == AlgebraKind::Diagonal && r != c) continue;
      if (opnorm(psi.iterate(unit, n) - unit) > tol.scaled(1.0))
        throw StructuralError(
            "crossed_product_expectation: psi^N is not the identity");
    }

  freefunc::HerglotzRepresentation rep;
  const CMat shift_up = cyclic_shift(n).adjoint();  // oriented for covariance
  rep.U = kron(shift_up, CMat::Identity(k, k));
  CMat e0 = CMat::Zero(n, 1);
  e0(0, 0) = Complex(1, 0);
  rep.V = kron(e0, CMat::Identity(k, k));

  if (psi.algebra.kind == AlgebraKind::Full) {
    // alpha(b) = D Pi (b (x) I_N) Pi* D* = blockdiag(b, psi(b), ...).
    CMat d = CMat::Zero(static_cast<Eigen::Index>(n) * k,
                        static_cast<Eigen::Index>(n) * k);
    CMat qpow = CMat::Identity(k, k);
    for (int i = 0; i < n; ++i) {
      d.block(static_cast<Eigen::Index>(i) * k, static_cast<Eigen::Index>(i) * k,
              k, k) = qpow;
      qpow = (psi.conjugator * qpow).eval();
    }
    CMat swap = CMat::Zero(static_cast<Eigen::Index>(n) * k,
                           static_cast<Eigen::Index>(n) * k);
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < n; ++i)
        swap(static_cast<Eigen::Index>(i) * k + a,
             static_cast<Eigen::Index>(a) * n + i) = Complex(1, 0);
    rep.alpha = UnitalEmbedding::full(k, n, d * swap);
  } else {
    std::vector<CMat> projections;
    const Eigen::Index m = static_cast<Eigen::Index>(n) * k;
    for (int j = 0; j < k; ++j) {
      CMat unit = CMat::Zero(k, k);
      unit(j, j) = Complex(1, 0);
      CMat p = CMat::Zero(m, m);
      CMat img = unit;
      for (int i = 0; i < n; ++i) {
        p.block(static_cast<Eigen::Index>(i) * k,
                static_cast<Eigen::Index>(i) * k, k, k) = img;
        img = psi.apply(img);
      }
      projections.push_back(std::move(p));
    }
    rep.alpha = UnitalEmbedding::diagonal(std::move(projections), tol);
  }
  return rep;
}

freefunc::HerglotzRepresentation shift_endomorphism_expectation(
    const AlgebraMap& psi, int n, const Tolerance& tol) {
  validate_truncation(n);
  if (psi.algebra.kind != AlgebraKind::Diagonal)
    throw StructuralError(
        "shift_endomorphism_expectation: construction needs a diagonal "
        "algebra");
  const int k = psi.algebra.k;
  const int window = 2 * n + 1;

  freefunc::HerglotzRepresentation rep;
  rep.U = kron(cyclic_shift(window), CMat::Identity(k, k));
  CMat e0 = CMat::Zero(window, 1);
  e0(0, 0) = Complex(1, 0);
  rep.V = kron(e0, CMat::Identity(k, k));

  std::vector<CMat> projections;
  const Eigen::Index m = static_cast<Eigen::Index>(window) * k;
  for (int j = 0; j < k; ++j) {
    CMat unit = CMat::Zero(k, k);
    unit(j, j) = Complex(1, 0);
    const CMat mapped = psi.apply(unit);
    CMat p = CMat::Zero(m, m);
    for (int i = 0; i < window; ++i)
      p.block(static_cast<Eigen::Index>(i) * k, static_cast<Eigen::Index>(i) * k,
              k, k) = (i == 0) ? unit : mapped;
    projections.push_back(std::move(p));
  }
  rep.alpha = UnitalEmbedding::diagonal(std::move(projections), tol);
  return rep;
}

}  // namespace nch::nonuniq
