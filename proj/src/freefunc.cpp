#include "nch/freefunc.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "nch/matrixcore.hpp"
#include "nch/sampling.hpp"

namespace nch::freefunc {

using matrixcore::opnorm;
using matrixcore::StructureKind;
using matrixcore::validate_structure;

void validate(const HerglotzRepresentation& rep, const Tolerance& tol) {
  rep.alpha.validate(tol);
  if (rep.U.rows() != rep.alpha.ambient_dim || rep.U.cols() != rep.U.rows())
    throw StructuralError("representation: U size does not match embedding");
  if (rep.V.rows() != rep.alpha.ambient_dim)
    throw StructuralError("representation: V rows do not match embedding");
  if (!validate_structure(rep.U, StructureKind::unitary, tol).ok)
    throw StructuralError("representation: U is not unitary");
  if (!validate_structure(rep.V, StructureKind::isometry, tol).ok)
    throw StructuralError("representation: V is not an isometry");
  if (rep.offset_T) {
    if (rep.offset_T->rows() != rep.output_dim() ||
        rep.offset_T->cols() != rep.output_dim())
      throw StructuralError("representation: offset size mismatch");
    if (!validate_structure(*rep.offset_T, StructureKind::hermitian, tol).ok)
      throw StructuralError("representation: offset is not Hermitian");
  }
}

namespace {

// Core of the representation formula given the already-embedded point.
CMat eval_from_embedded(const HerglotzRepresentation& rep, const CMat& e,
                        int level, const Tolerance& tol) {
  const double nrm = opnorm(e);
  if (nrm >= 1.0) {
    std::ostringstream os;
    os << "not a strict contraction after embedding (norm " << nrm << ")";
    throw DomainError(os.str());
  }
  const Eigen::Index mn = e.rows();
  const CMat u_amp = amplify(rep.U, level);
  const CMat v_amp = amplify(rep.V, level);
  const CMat k = u_amp * e;
  const CMat lhs = CMat::Identity(mn, mn) - k;
  Eigen::PartialPivLU<CMat> lu(lhs);
  if (lu.rcond() < tol.relative) {
    std::ostringstream os;
    os << "resolvent too ill-conditioned (rcond " << lu.rcond() << ")";
    throw DomainError(os.str());
  }
  const CMat z = lu.solve(v_amp);
  CMat h = v_amp.adjoint() * (v_amp + k * z);  // V*(I + K)(I - K)^{-1}V
  if (rep.offset_T)
    h += Complex(0, 1) * amplify(*rep.offset_T, level);
  return h;
}

}  // namespace

CMat eval_herglotz(const HerglotzRepresentation& rep, const LeveledElement& x,
                   const Tolerance& tol) {
  return eval_from_embedded(rep, embed(rep.alpha, x), x.level, tol);
}

CMat eval_herglotz_delta(const HerglotzRepresentation& rep,
                         const FreePolynomial& delta, const LeveledElement& x,
                         const Tolerance& tol) {
  return eval_from_embedded(rep, embed(rep.alpha, delta.eval(x)), x.level, tol);
}

CMat eval_herglotz_truncated(const HerglotzRepresentation& rep,
                             const LeveledElement& x, int order) {
  const CMat e = embed(rep.alpha, x);
  const CMat u_amp = amplify(rep.U, x.level);
  const CMat v_amp = amplify(rep.V, x.level);
  const CMat k = u_amp * e;
  CMat acc = CMat::Identity(k.rows(), k.cols());
  CMat pow = CMat::Identity(k.rows(), k.cols());
  for (int j = 1; j <= order; ++j) {
    pow = (pow * k).eval();
    acc += 2.0 * pow;
  }
  return v_amp.adjoint() * acc * v_amp;
}

CMat cayley_to_schur(const CMat& h, const Tolerance& tol) {
  if (h.rows() != h.cols()) throw StructuralError("cayley: matrix not square");
  const CMat eye = CMat::Identity(h.rows(), h.cols());
  Eigen::PartialPivLU<CMat> lu(h + eye);
  if (lu.rcond() < tol.relative)
    throw DomainError("cayley_to_schur: H + I singular");
  // (H - I)(H + I)^{-1} = (H + I)^{-1}(H - I): both factors commute.
  return lu.solve(h - eye);
}

CMat cayley_to_herglotz(const CMat& f, const Tolerance& tol) {
  if (f.rows() != f.cols()) throw StructuralError("cayley: matrix not square");
  const CMat eye = CMat::Identity(f.rows(), f.cols());
  Eigen::PartialPivLU<CMat> lu(eye - f);
  if (lu.rcond() < tol.relative)
    throw DomainError("cayley_to_herglotz: I - F singular");
  return lu.solve(eye + f);
}

FreeAxiomReport check_free_axioms(const HerglotzRepresentation& rep,
                                  int trials, unsigned long long seed,
                                  const Tolerance& tol) {
  if (trials < 1) throw StructuralError("check_free_axioms: trials must be >= 1");
  sampling::Rng rng(seed);
  const auto& alg = rep.alpha.algebra;
  const Eigen::Index d = rep.output_dim();
  FreeAxiomReport report;
  report.trials = trials;

  for (int t = 0; t < trials; ++t) {
    const int nx = rng.uniform_int(1, 2);
    const int ny = rng.uniform_int(1, 2);
    const auto x = sampling::random_ball_point(rng, alg, nx, 0.3, 0.8);
    const auto y = sampling::random_ball_point(rng, alg, ny, 0.3, 0.8);
    const auto xy = direct_sum(x, y);

    const CMat hx = eval_herglotz(rep, x, tol);
    const CMat hy = eval_herglotz(rep, y, tol);
    const CMat hxy = eval_herglotz(rep, xy, tol);

    CMat block = CMat::Zero(hxy.rows(), hxy.cols());
    block.topLeftCorner(hx.rows(), hx.cols()) = hx;
    block.bottomRightCorner(hy.rows(), hy.cols()) = hy;
    report.direct_sum_residual =
        std::max(report.direct_sum_residual, opnorm(hxy - block));

    // Row selection Gamma = [I 0]: Gamma (X (+) Y) = X Gamma.
    CMat gamma = CMat::Zero(static_cast<Eigen::Index>(nx) * alg.k,
                            static_cast<Eigen::Index>(nx + ny) * alg.k);
    gamma.leftCols(gamma.rows()) =
        CMat::Identity(gamma.rows(), gamma.rows());
    // Amplified over the output dimension: scalar levels act blockwise.
    CMat gamma_out = CMat::Zero(static_cast<Eigen::Index>(nx) * d,
                                static_cast<Eigen::Index>(nx + ny) * d);
    gamma_out.leftCols(gamma_out.rows()) =
        CMat::Identity(gamma_out.rows(), gamma_out.rows());
    report.intertwine_residual = std::max(
        report.intertwine_residual, opnorm(gamma_out * hxy - hx * gamma_out));

    // Permutation similarity at the direct-sum level.
    const int n = nx + ny;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    CMat p_alg = CMat::Zero(static_cast<Eigen::Index>(n) * alg.k,
                            static_cast<Eigen::Index>(n) * alg.k);
    CMat p_out = CMat::Zero(static_cast<Eigen::Index>(n) * d,
                            static_cast<Eigen::Index>(n) * d);
    for (int i = 0; i < n; ++i) {
      p_alg.block(i * alg.k, perm[i] * alg.k, alg.k, alg.k) =
          CMat::Identity(alg.k, alg.k);
      p_out.block(i * d, perm[i] * d, d, d) = CMat::Identity(d, d);
    }
    const auto conj = make_leveled(alg, n,
                                   p_alg * xy.matrix * p_alg.adjoint());
    const CMat h_conj = eval_herglotz(rep, conj, tol);
    report.similarity_residual =
        std::max(report.similarity_residual,
                 opnorm(h_conj - p_out * hxy * p_out.adjoint()));
  }
  return report;
}

Evaluator make_evaluator(const HerglotzRepresentation& rep,
                         const Tolerance& tol) {
  return [rep, tol](const LeveledElement& x) {
    return eval_herglotz(rep, x, tol);
  };
}

Evaluator regularize(const CMat& h0, Evaluator h, const Tolerance& tol) {
  if (h0.rows() != h0.cols()) throw StructuralError("regularize: h0 not square");
  const CMat s = 0.5 * (h0 + h0.adjoint());
  const CMat t = (h0 - h0.adjoint()) / Complex(0, 2);
  Eigen::SelfAdjointEigenSolver<CMat> es(s);
  const double lmin = es.eigenvalues()(0);
  if (lmin <= tol.scaled(1.0)) {
    std::ostringstream os;
    os << "regularize: degenerate real part (lambda_min " << lmin << ")";
    throw DomainError(os.str());
  }
  CMat s_invroot = es.eigenvectors() *
                   es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().adjoint();
  const Eigen::Index d = h0.rows();
  return [s_invroot, t, d, h = std::move(h)](const LeveledElement& x) {
    CMat val = h(x);
    if (val.rows() % d != 0)
      throw StructuralError("regularize: evaluator output size mismatch");
    const int level = static_cast<int>(val.rows() / d);
    const CMat si = amplify(s_invroot, level);
    const CMat ti = amplify(t, level);
    return (si * (val - Complex(0, 1) * ti) * si).eval();
  };
}

}  // namespace nch::freefunc
