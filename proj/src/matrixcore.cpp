#include "nch/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nch::matrixcore {

namespace {

// Two-sided Jacobi is precise but O(n^3) with a large constant; past small
// sizes the extreme singular values come from the Hermitian eigenproblem of
// M*M instead.
constexpr Eigen::Index kJacobiLimit = 32;

double extreme_singular(const CMat& m, bool largest) {
  const CMat gram = (m.rows() <= m.cols()) ? CMat(m * m.adjoint())
                                           : CMat(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lambda = largest ? ev(ev.size() - 1) : ev(0);
  return std::sqrt(std::max(0.0, lambda));
}

double lower_part_norm(const CMat& m) {
  // Norm of everything on or below the diagonal; zero iff strictly upper
  // triangular, which forces nilpotency.
  CMat low = m;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = r + 1; c < m.cols(); ++c) low(r, c) = Complex(0, 0);
  return opnorm(low);
}

}  // namespace

double opnorm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= kJacobiLimit &&
      std::max(m.rows(), m.cols()) <= 2 * kJacobiLimit)
    return Eigen::JacobiSVD<CMat>(m).singularValues()(0);
  return extreme_singular(m, true);
}

double sigma_min(const CMat& m) {
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= kJacobiLimit &&
      std::max(m.rows(), m.cols()) <= 2 * kJacobiLimit) {
    const auto sv = Eigen::JacobiSVD<CMat>(m).singularValues();
    return sv(sv.size() - 1);
  }
  return extreme_singular(m, false);
}

double min_real_eig(const CMat& m) {
  CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

const char* structure_name(StructureKind kind) {
  switch (kind) {
    case StructureKind::hermitian: return "hermitian";
    case StructureKind::psd: return "psd";
    case StructureKind::contraction_strict: return "contraction-strict";
    case StructureKind::contraction_weak: return "contraction-weak";
    case StructureKind::unitary: return "unitary";
    case StructureKind::isometry: return "isometry";
    case StructureKind::nilpotent_superdiag: return "nilpotent-superdiag";
  }
  return "?";
}

StructureReport validate_structure(const CMat& m, StructureKind kind,
                                   const Tolerance& tol) {
  require_finite(m, "validate_structure");
  const bool square = m.rows() == m.cols();
  switch (kind) {
    case StructureKind::hermitian:
    case StructureKind::psd:
    case StructureKind::unitary:
    case StructureKind::nilpotent_superdiag:
      if (!square)
        throw StructuralError(std::string("validate_structure(") +
                              structure_name(kind) + "): matrix not square");
      break;
    case StructureKind::isometry:
      if (m.rows() < m.cols())
        throw StructuralError(
            "validate_structure(isometry): fewer rows than columns");
      break;
    default:
      break;
  }

  StructureReport rep;
  const double scale = std::max(1.0, opnorm(m));
  switch (kind) {
    case StructureKind::hermitian:
      rep.defect = 0.5 * opnorm(m - m.adjoint());
      break;
    case StructureKind::psd: {
      const double herm = 0.5 * opnorm(m - m.adjoint());
      rep.defect = std::max(herm, std::max(0.0, -min_real_eig(m)));
      break;
    }
    case StructureKind::contraction_strict:
    case StructureKind::contraction_weak:
      rep.defect = std::max(0.0, opnorm(m) - 1.0);
      break;
    case StructureKind::unitary:
      rep.defect = opnorm(m.adjoint() * m - CMat::Identity(m.cols(), m.cols()));
      break;
    case StructureKind::isometry:
      rep.defect = opnorm(m.adjoint() * m - CMat::Identity(m.cols(), m.cols()));
      break;
    case StructureKind::nilpotent_superdiag:
      rep.defect = lower_part_norm(m);
      break;
  }

  rep.ok = rep.defect <= tol.scaled(scale);
  if (kind == StructureKind::contraction_strict)
    rep.ok = opnorm(m) < 1.0;  // the open condition, no tolerance slack
  return rep;
}

CMat unitary_completion(const CMat& v, const Tolerance& tol) {
  require_finite(v, "unitary_completion");
  const Eigen::Index m = v.rows();
  const Eigen::Index d = v.cols();
  if (m < d) throw StructuralError("unitary_completion: more columns than rows");

  auto iso = validate_structure(v, StructureKind::isometry, tol);
  if (!iso.ok) {
    std::ostringstream os;
    os << "unitary_completion: input is not an isometry (defect " << iso.defect
       << ")";
    throw DomainError(os.str());
  }
  if (m == d) return v;

  CMat w(m, m);
  w.leftCols(d) = v;
  Eigen::Index filled = d;
  for (Eigen::Index j = 0; j < m && filled < m; ++j) {
    CVec cand = CVec::Zero(m);
    cand(j) = Complex(1, 0);
    // Two Gram-Schmidt sweeps keep orthogonality at machine precision.
    for (int sweep = 0; sweep < 2; ++sweep)
      cand -= w.leftCols(filled) * (w.leftCols(filled).adjoint() * cand);
    const double nrm = cand.norm();
    if (nrm > 1e-8) {
      w.col(filled++) = cand / nrm;
    }
  }
  if (filled != m)
    throw Error("unitary_completion: failed to span the complement");
  return w;
}

CMat lurking_isometry(const CMat& phi_cols, const CMat& theta_cols,
                      const Tolerance& tol) {
  require_finite(phi_cols, "lurking_isometry(phi)");
  require_finite(theta_cols, "lurking_isometry(theta)");
  if (phi_cols.rows() != theta_cols.rows() ||
      phi_cols.cols() != theta_cols.cols())
    throw StructuralError("lurking_isometry: column families differ in shape");
  if (phi_cols.cols() == 0)
    throw StructuralError("lurking_isometry: empty column families");

  const CMat gram_phi = phi_cols.adjoint() * phi_cols;
  const CMat gram_theta = theta_cols.adjoint() * theta_cols;
  const double gram_residual = (gram_phi - gram_theta).cwiseAbs().maxCoeff();
  const double gram_scale =
      std::max(1.0, std::max(gram_phi.cwiseAbs().maxCoeff(),
                             gram_theta.cwiseAbs().maxCoeff()));
  if (gram_residual > tol.scaled(gram_scale)) {
    std::ostringstream os;
    os << "no lurking isometry: Gramians differ, max residual "
       << gram_residual;
    throw InconsistencyError(os.str());
  }

  Eigen::JacobiSVD<CMat> svd(phi_cols,
                             Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.relative * sigma_max) ++rank;
  if (rank == 0)
    throw StructuralError("lurking_isometry: phi columns are all zero");

  const CMat q_phi = svd.matrixU().leftCols(rank);
  CMat q_theta = theta_cols * svd.matrixV().leftCols(rank) *
                 sv.head(rank).cwiseInverse().asDiagonal();
  // The Gram equality makes q_theta an isometry up to the data's residual;
  // snap it to the nearest one so the completion below stays clean.
  Eigen::JacobiSVD<CMat> polar(q_theta,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  q_theta = polar.matrixU() * polar.matrixV().adjoint();

  const CMat w_phi = unitary_completion(q_phi, tol);
  const CMat w_theta = unitary_completion(q_theta, tol);
  return w_theta * w_phi.adjoint();
}

SchurComplementResult schur_complement_unitary(const CMat& l, Eigen::Index d1,
                                               const Tolerance& tol) {
  require_finite(l, "schur_complement_unitary");
  if (l.rows() != l.cols())
    throw StructuralError("schur_complement_unitary: L not square");
  if (d1 <= 0 || d1 >= l.rows())
    throw StructuralError("schur_complement_unitary: bad split");

  const Eigen::Index d2 = l.rows() - d1;
  const CMat a = l.topLeftCorner(d1, d1);
  const CMat b = l.topRightCorner(d1, d2);
  const CMat c = l.bottomLeftCorner(d2, d1);
  const CMat d = l.bottomRightCorner(d2, d2);

  const CMat eye = CMat::Identity(d1, d1);
  const double scale = std::max(1.0, opnorm(a));
  if (sigma_min(a - eye) <= tol.scaled(scale))
    throw DomainError(
        "schur_complement_unitary: spectral condition violated (1 in "
        "spectrum of A)");
  if (sigma_min(a + eye) <= tol.scaled(scale))
    throw DomainError(
        "schur_complement_unitary: spectral condition violated (I + A "
        "singular)");

  Eigen::PartialPivLU<CMat> lu(eye + a);
  SchurComplementResult res;
  res.V_raw = lu.solve(CMat::Identity(d1, d1)).eval();
  res.V_raw = (c * res.V_raw).eval();
  res.U = d - c * lu.solve(b);
  return res;
}

}  // namespace nch::matrixcore
