#include "nch/lurking.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "nch/matrixcore.hpp"
#include "nch/sampling.hpp"

namespace nch::lurking {

using matrixcore::opnorm;

freefunc::HerglotzRepresentation canonicalize(
    const freefunc::HerglotzRepresentation& rep, const Tolerance& tol) {
  const auto& alpha = rep.alpha;
  if (alpha.algebra.kind == AlgebraKind::Full) {
    const CMat& w = alpha.conjugator;
    freefunc::HerglotzRepresentation out;
    out.alpha = UnitalEmbedding::full(alpha.algebra.k, alpha.multiplicity);
    out.U = w.adjoint() * rep.U * w;
    out.V = w.adjoint() * rep.V;
    out.offset_T = rep.offset_T;
    return out;
  }
  // Diagonal: conjugate so each projection becomes an index-ordered block.
  const Eigen::Index m = alpha.ambient_dim;
  CMat g(m, m);
  std::vector<Eigen::Index> mult;
  Eigen::Index off = 0;
  for (const auto& p : alpha.projections) {
    Eigen::SelfAdjointEigenSolver<CMat> es(p);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (es.eigenvalues()(i) > 0.5) ++rank;
    // Eigenvalues ascend, so the range basis sits in the last `rank` columns.
    g.middleCols(off, rank) = es.eigenvectors().rightCols(rank);
    mult.push_back(rank);
    off += rank;
  }
  if (off != m)
    throw StructuralError("canonicalize: projection ranks do not fill space");
  auto rep_unitary =
      matrixcore::validate_structure(g, matrixcore::StructureKind::unitary, tol);
  if (!rep_unitary.ok)
    throw StructuralError("canonicalize: projection bases not orthonormal");
  freefunc::HerglotzRepresentation out;
  out.alpha = UnitalEmbedding::diagonal_canonical(mult);
  out.U = g.adjoint() * rep.U * g;
  out.V = g.adjoint() * rep.V;
  out.offset_T = rep.offset_T;
  return out;
}

ModelData model_from_rep(const freefunc::HerglotzRepresentation& rep,
                         const FreePolynomial& delta,
                         const std::vector<LeveledElement>& points,
                         const Tolerance& tol) {
  if (rep.offset_T)
    throw StructuralError("model_from_rep: representation must be regular");
  const auto canon = canonicalize(rep, tol);
  ModelData model;
  model.delta = delta;
  model.model_embedding = canon.alpha;

  for (const auto& x : points) {
    const LeveledElement dx = delta.eval(x);
    const CMat e = embed(canon.alpha, dx);
    const double nrm = opnorm(e);
    if (nrm >= 1.0) {
      std::ostringstream os;
      os << "model_from_rep: point is not a strict delta-contraction (norm "
         << nrm << ")";
      throw DomainError(os.str());
    }
    const CMat u_amp = amplify(canon.U, x.level);
    const CMat v_amp = amplify(canon.V, x.level);
    const CMat k = u_amp * e;
    Eigen::PartialPivLU<CMat> lu(CMat::Identity(k.rows(), k.cols()) - k);
    ModelSample sample;
    sample.x = x;
    sample.v = lu.solve(2.0 * v_amp);
    sample.h = v_amp.adjoint() * (v_amp + k * lu.solve(v_amp));
    // u = v (h + I)^{-1}; h + I is invertible since Re h >= 0.
    const CMat hp = sample.h + CMat::Identity(sample.h.rows(), sample.h.cols());
    sample.u_model = hp.adjoint()
                         .partialPivLu()
                         .solve(sample.v.adjoint())
                         .adjoint();
    model.samples.push_back(std::move(sample));
  }
  return model;
}

double model_identity_residual(const ModelData& model, size_t sample_index,
                               const CMat& t, const Tolerance& tol) {
  if (sample_index >= model.samples.size())
    throw StructuralError("model_identity_residual: sample index out of range");
  const auto& s = model.samples[sample_index];
  const int n = s.x.level;
  if (t.rows() != n || t.cols() != n)
    throw StructuralError("model_identity_residual: T must be level x level");
  const Eigen::Index d = s.h.rows() / n;
  const Eigen::Index m = s.v.rows() / n;

  // kron(T, I) in the level-outer layout.
  auto weight = [&](Eigen::Index blk) {
    CMat w = CMat::Zero(n * blk, n * blk);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w.block(i * blk, j * blk, blk, blk) =
            t(i, j) * CMat::Identity(blk, blk);
    return w;
  };
  const CMat t_out = weight(d);
  const CMat t_model = weight(m);

  const CMat f = freefunc::cayley_to_schur(s.h, tol);
  const CMat lhs = t_out - f.adjoint() * t_out * f;
  const CMat e = embed(model.model_embedding, model.delta.eval(s.x));
  const CMat rhs =
      s.u_model.adjoint() * (t_model - e.adjoint() * t_model * e) * s.u_model;
  return opnorm(lhs - rhs);
}

GramianColumns build_gramian_columns(const ModelData& model,
                                     const Tolerance& tol) {
  if (model.samples.empty())
    throw StructuralError("build_gramian_columns: model has no samples");
  const Eigen::Index d = model.output_dim();
  const Eigen::Index m = model.model_dim();

  Eigen::Index total = 0;
  for (const auto& s : model.samples)
    total += static_cast<Eigen::Index>(s.x.level) * s.h.cols();

  GramianColumns out;
  out.phi.resize(d + m, total);
  out.theta.resize(d + m, total);
  Eigen::Index col = 0;
  for (const auto& s : model.samples) {
    const int n = s.x.level;
    const CMat eye = CMat::Identity(s.h.rows(), s.h.cols());
    const CMat top_phi = s.h + eye;
    const CMat top_theta = s.h - eye;
    const CMat e = embed(model.model_embedding, model.delta.eval(s.x));
    const CMat bot_phi = e * s.v;
    const CMat& bot_theta = s.v;
    for (Eigen::Index j = 0; j < s.h.cols(); ++j)
      for (int slot = 0; slot < n; ++slot) {
        out.phi.block(0, col, d, 1) = top_phi.block(slot * d, j, d, 1);
        out.phi.block(d, col, m, 1) = bot_phi.block(slot * m, j, m, 1);
        out.theta.block(0, col, d, 1) = top_theta.block(slot * d, j, d, 1);
        out.theta.block(d, col, m, 1) = bot_theta.block(slot * m, j, m, 1);
        ++col;
      }
  }

  const CMat gram_phi = out.phi.adjoint() * out.phi;
  const CMat gram_theta = out.theta.adjoint() * out.theta;
  out.gram_residual = (gram_phi - gram_theta).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, gram_phi.cwiseAbs().maxCoeff());
  if (out.gram_residual > tol.scaled(scale)) {
    std::ostringstream os;
    os << "model data inconsistent: Gramian residual " << out.gram_residual;
    throw InconsistencyError(os.str());
  }
  return out;
}

namespace {

bool is_zero_sample(const ModelSample& s) {
  return s.x.matrix.cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

freefunc::HerglotzRepresentation recover_representation(const ModelData& model,
                                                        const Tolerance& tol) {
  const bool has_zero =
      std::any_of(model.samples.begin(), model.samples.end(), is_zero_sample);
  if (!has_zero)
    throw StructuralError(
        "recover_representation: model must contain the point X = 0");

  const auto cols = build_gramian_columns(model, tol);
  const Eigen::Index d = model.output_dim();
  const CMat l = matrixcore::lurking_isometry(cols.phi, cols.theta, tol);
  auto schur = matrixcore::schur_complement_unitary(l, d, tol);

  freefunc::HerglotzRepresentation rec;
  rec.alpha = model.model_embedding;
  rec.U = std::move(schur.U);
  rec.V = std::move(schur.V_raw);

  const auto u_rep =
      matrixcore::validate_structure(rec.U, matrixcore::StructureKind::unitary,
                                     tol);
  const auto v_rep = matrixcore::validate_structure(
      rec.V, matrixcore::StructureKind::isometry, tol);
  if (!u_rep.ok || !v_rep.ok) {
    std::ostringstream os;
    os << "recover_representation: recovered data fails validation (U defect "
       << u_rep.defect << ", V defect " << v_rep.defect << ")";
    throw InconsistencyError(os.str());
  }
  return rec;
}

RecoveryReport roundtrip_verify(const freefunc::HerglotzRepresentation& rep,
                                const FreePolynomial& delta, int sample_count,
                                int fresh_count, unsigned long long seed,
                                const Tolerance& tol) {
  if (sample_count < 1)
    throw StructuralError("roundtrip_verify: sample_count must be >= 1");
  sampling::Rng rng(seed);
  const auto& alg = rep.alpha.algebra;

  std::vector<LeveledElement> points;
  points.push_back(zero_element(alg, 1));
  while (static_cast<int>(points.size()) < sample_count) {
    const int level = rng.uniform_int(1, 2);
    auto x = sampling::random_ball_point(rng, alg, level, 0.3, 0.8);
    // Keep the point inside the delta-contraction domain.
    for (int guard = 0; guard < 60; ++guard) {
      const CMat e = embed(rep.alpha, delta.eval(x));
      if (opnorm(e) <= 0.9) break;
      x.matrix *= 0.7;
    }
    points.push_back(std::move(x));
  }

  ModelData model = model_from_rep(rep, delta, points, tol);
  const auto cols = build_gramian_columns(model, tol);
  const auto recovered = recover_representation(model, tol);

  RecoveryReport report;
  report.sample_count = static_cast<int>(points.size());
  report.fresh_sample_count = fresh_count;
  report.gram_residual = cols.gram_residual;
  report.U_defect =
      matrixcore::validate_structure(recovered.U,
                                     matrixcore::StructureKind::unitary, tol)
          .defect;
  report.V_defect =
      matrixcore::validate_structure(recovered.V,
                                     matrixcore::StructureKind::isometry, tol)
          .defect;

  for (int i = 0; i < fresh_count; ++i) {
    const int level = 1 + (i % 3);  // include levels above the samples
    auto x = sampling::random_ball_point(rng, alg, level, 0.3, 0.8);
    for (int guard = 0; guard < 60; ++guard) {
      const CMat e = embed(rep.alpha, delta.eval(x));
      if (opnorm(e) <= 0.9) break;
      x.matrix *= 0.7;
    }
    const CMat h0 = freefunc::eval_herglotz_delta(rep, delta, x, tol);
    const CMat h1 = freefunc::eval_herglotz_delta(recovered, delta, x, tol);
    report.roundtrip_max_error =
        std::max(report.roundtrip_max_error, opnorm(h0 - h1));
  }
  return report;
}

}  // namespace nch::lurking
