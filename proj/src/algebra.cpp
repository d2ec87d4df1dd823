#include "nch/algebra.hpp"

#include <sstream>

#include "nch/matrixcore.hpp"

namespace nch {

namespace {

void check_diagonal_blocks(const CMat& m, int level, int k,
                           const Tolerance& tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int bi = 0; bi < level; ++bi)
    for (int bj = 0; bj < level; ++bj) {
      const CMat block = m.block(bi * k, bj * k, k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          if (r != c && std::abs(block(r, c)) > tol.scaled(scale)) {
            std::ostringstream os;
            os << "diagonal algebra element has off-diagonal entry in block ("
               << bi << "," << bj << ")";
            throw StructuralError(os.str());
          }
    }
}

}  // namespace

LeveledElement make_leveled(const AlgebraDescriptor& alg, int level, CMat m,
                            const Tolerance& tol) {
  if (alg.k < 1) throw StructuralError("algebra size must be >= 1");
  if (level < 1) throw StructuralError("level must be >= 1");
  const Eigen::Index n = static_cast<Eigen::Index>(level) * alg.k;
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << "leveled element: expected " << n << "x" << n << " matrix, got "
       << m.rows() << "x" << m.cols();
    throw StructuralError(os.str());
  }
  require_finite(m, "leveled element");
  if (alg.kind == AlgebraKind::Diagonal)
    check_diagonal_blocks(m, level, alg.k, tol);
  return LeveledElement{alg, level, std::move(m)};
}

LeveledElement zero_element(const AlgebraDescriptor& alg, int level) {
  const Eigen::Index n = static_cast<Eigen::Index>(level) * alg.k;
  return LeveledElement{alg, level, CMat::Zero(n, n)};
}

LeveledElement direct_sum(const LeveledElement& x, const LeveledElement& y) {
  if (!(x.algebra == y.algebra))
    throw StructuralError("direct_sum: algebra mismatch");
  const int k = x.algebra.k;
  const int n = x.level + y.level;
  CMat m = CMat::Zero(static_cast<Eigen::Index>(n) * k,
                      static_cast<Eigen::Index>(n) * k);
  const Eigen::Index xs = static_cast<Eigen::Index>(x.level) * k;
  const Eigen::Index ys = static_cast<Eigen::Index>(y.level) * k;
  m.topLeftCorner(xs, xs) = x.matrix;
  m.bottomRightCorner(ys, ys) = y.matrix;
  return LeveledElement{x.algebra, n, std::move(m)};
}

UnitalEmbedding UnitalEmbedding::full(int k, Eigen::Index s, CMat w) {
  if (k < 1 || s < 1) throw StructuralError("full embedding: k, s must be >= 1");
  UnitalEmbedding e;
  e.algebra = {AlgebraKind::Full, k};
  e.ambient_dim = k * s;
  e.multiplicity = s;
  if (w.size() == 0) w = CMat::Identity(e.ambient_dim, e.ambient_dim);
  if (w.rows() != e.ambient_dim || w.cols() != e.ambient_dim)
    throw StructuralError("full embedding: conjugator has wrong size");
  e.conjugator = std::move(w);
  return e;
}

UnitalEmbedding UnitalEmbedding::diagonal(std::vector<CMat> projections,
                                          const Tolerance& tol) {
  if (projections.empty())
    throw StructuralError("diagonal embedding: no projections");
  UnitalEmbedding e;
  e.algebra = {AlgebraKind::Diagonal, static_cast<int>(projections.size())};
  e.ambient_dim = projections.front().rows();
  e.projections = std::move(projections);
  e.validate(tol);
  return e;
}

UnitalEmbedding UnitalEmbedding::diagonal_canonical(
    const std::vector<Eigen::Index>& mult) {
  Eigen::Index m = 0;
  for (auto s : mult) {
    if (s < 0) throw StructuralError("diagonal embedding: negative multiplicity");
    m += s;
  }
  if (m == 0) throw StructuralError("diagonal embedding: zero ambient dimension");
  std::vector<CMat> projs;
  Eigen::Index off = 0;
  for (auto s : mult) {
    CMat p = CMat::Zero(m, m);
    p.block(off, off, s, s) = CMat::Identity(s, s);
    off += s;
    projs.push_back(std::move(p));
  }
  return diagonal(std::move(projs));
}

void UnitalEmbedding::validate(const Tolerance& tol) const {
  if (algebra.kind == AlgebraKind::Full) {
    if (ambient_dim != algebra.k * multiplicity)
      throw StructuralError("full embedding: ambient_dim != k * s");
    auto rep = matrixcore::validate_structure(
        conjugator, matrixcore::StructureKind::unitary, tol);
    if (!rep.ok)
      throw StructuralError("full embedding: conjugator is not unitary");
    return;
  }
  if (static_cast<int>(projections.size()) != algebra.k)
    throw StructuralError("diagonal embedding: projection count != k");
  CMat sum = CMat::Zero(ambient_dim, ambient_dim);
  for (size_t i = 0; i < projections.size(); ++i) {
    const CMat& p = projections[i];
    if (p.rows() != ambient_dim || p.cols() != ambient_dim)
      throw StructuralError("diagonal embedding: projection size mismatch");
    const double scale = 1.0;
    if (matrixcore::opnorm(p - p.adjoint()) > tol.scaled(scale) ||
        matrixcore::opnorm(p * p - p) > tol.scaled(scale))
      throw StructuralError("diagonal embedding: not a projection");
    for (size_t j = 0; j < i; ++j)
      if (matrixcore::opnorm(projections[i] * projections[j]) >
          tol.scaled(scale))
        throw StructuralError("diagonal embedding: projections not orthogonal");
    sum += p;
  }
  if (matrixcore::opnorm(sum - CMat::Identity(ambient_dim, ambient_dim)) >
      tol.scaled(1.0))
    throw StructuralError("diagonal embedding: projections do not sum to I");
}

CMat UnitalEmbedding::apply(const CMat& b) const {
  if (b.rows() != algebra.k || b.cols() != algebra.k)
    throw StructuralError("embedding: element has wrong size");
  if (algebra.kind == AlgebraKind::Full) {
    CMat amp = CMat::Zero(ambient_dim, ambient_dim);
    for (int r = 0; r < algebra.k; ++r)
      for (int c = 0; c < algebra.k; ++c)
        amp.block(r * multiplicity, c * multiplicity, multiplicity,
                  multiplicity) =
            b(r, c) * CMat::Identity(multiplicity, multiplicity);
    return conjugator * amp * conjugator.adjoint();
  }
  CMat out = CMat::Zero(ambient_dim, ambient_dim);
  for (int j = 0; j < algebra.k; ++j) out += b(j, j) * projections[j];
  return out;
}

CMat embed(const UnitalEmbedding& alpha, const LeveledElement& x) {
  if (!(x.algebra == alpha.algebra))
    throw StructuralError("embed: point and embedding algebras differ");
  const int n = x.level;
  const int k = x.algebra.k;
  const Eigen::Index m = alpha.ambient_dim;
  CMat out(static_cast<Eigen::Index>(n) * m, static_cast<Eigen::Index>(n) * m);
  for (int bi = 0; bi < n; ++bi)
    for (int bj = 0; bj < n; ++bj)
      out.block(bi * m, bj * m, m, m) =
          alpha.apply(x.matrix.block(bi * k, bj * k, k, k));
  return out;
}

CMat amplify(const CMat& op, int level) {
  const Eigen::Index r = op.rows();
  const Eigen::Index c = op.cols();
  CMat out = CMat::Zero(r * level, c * level);
  for (int i = 0; i < level; ++i) out.block(i * r, i * c, r, c) = op;
  return out;
}

FreePolynomial FreePolynomial::identity(const AlgebraDescriptor& alg) {
  return power(alg, 1);
}

FreePolynomial FreePolynomial::power(const AlgebraDescriptor& alg, int p) {
  if (p < 1) throw StructuralError("free polynomial: power must be >= 1");
  FreePolynomial delta;
  delta.algebra = alg;
  Term t;
  t.coeff = CMat::Identity(alg.k, alg.k);
  t.stars.assign(p, false);
  delta.terms.push_back(std::move(t));
  return delta;
}

LeveledElement FreePolynomial::eval(const LeveledElement& x) const {
  if (!(x.algebra == algebra))
    throw StructuralError("free polynomial: algebra mismatch");
  const Eigen::Index n = x.matrix.rows();
  CMat acc = CMat::Zero(n, n);
  for (const auto& t : terms) {
    if (t.stars.empty())
      throw StructuralError("free polynomial: constant term not allowed");
    if (t.coeff.rows() != algebra.k || t.coeff.cols() != algebra.k)
      throw StructuralError("free polynomial: coefficient has wrong size");
    CMat w = amplify(t.coeff, x.level);
    for (bool starred : t.stars)
      w = starred ? (w * x.matrix.adjoint()).eval() : (w * x.matrix).eval();
    acc += w;
  }
  return make_leveled(algebra, x.level, std::move(acc));
}

}  // namespace nch
