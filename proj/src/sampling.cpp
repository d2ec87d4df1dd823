#include "nch/sampling.hpp"

#include <Eigen/QR>

#include "nch/matrixcore.hpp"

namespace nch::sampling {

CMat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.cgaussian();
  return m;
}

CMat random_unitary(Rng& rng, Eigen::Index n) {
  CMat g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution does not depend on QR conventions.
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return q;
}

CMat random_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  if (rows < cols)
    throw StructuralError("random_isometry: rows must be >= cols");
  return random_unitary(rng, rows).leftCols(cols);
}

CMat random_hermitian(Rng& rng, Eigen::Index n) {
  CMat g = gaussian_matrix(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

CMat random_density(Rng& rng, Eigen::Index n) {
  CMat g = gaussian_matrix(rng, n, n);
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

LeveledElement random_ball_point_norm(Rng& rng, const AlgebraDescriptor& alg,
                                      int level, double target_norm) {
  const int k = alg.k;
  const Eigen::Index n = static_cast<Eigen::Index>(level) * k;
  CMat m;
  if (alg.kind == AlgebraKind::Full) {
    m = gaussian_matrix(rng, n, n);
  } else {
    m = CMat::Zero(n, n);
    for (int bi = 0; bi < level; ++bi)
      for (int bj = 0; bj < level; ++bj)
        for (int d = 0; d < k; ++d)
          m(bi * k + d, bj * k + d) = rng.cgaussian();
  }
  const double nrm = matrixcore::opnorm(m);
  if (nrm > 0) m *= target_norm / nrm;
  return make_leveled(alg, level, std::move(m));
}

LeveledElement random_ball_point(Rng& rng, const AlgebraDescriptor& alg,
                                 int level, double norm_lo, double norm_hi) {
  return random_ball_point_norm(rng, alg, level,
                                rng.uniform(norm_lo, norm_hi));
}

}  // namespace nch::sampling
