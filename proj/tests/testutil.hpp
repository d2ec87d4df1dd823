#ifndef NCH_TESTS_TESTUTIL_HPP
#define NCH_TESTS_TESTUTIL_HPP

// Shared generators and oracles for the unit and acceptance suites.

#include <vector>

#include "nch/algebra.hpp"
#include "nch/freefunc.hpp"
#include "nch/matrixcore.hpp"
#include "nch/sampling.hpp"
#include "nch/types.hpp"

namespace nch::testutil {

// Random representation over Full(k) with multiplicity s and output dim d.
inline freefunc::HerglotzRepresentation random_full_rep(sampling::Rng& rng,
                                                        int k, int s, int d,
                                                        bool random_w = true) {
  const Eigen::Index m = static_cast<Eigen::Index>(k) * s;
  freefunc::HerglotzRepresentation rep;
  rep.alpha = UnitalEmbedding::full(
      k, s, random_w ? sampling::random_unitary(rng, m) : CMat());
  rep.U = sampling::random_unitary(rng, m);
  rep.V = sampling::random_isometry(rng, m, d);
  return rep;
}

// Random representation over Diagonal(k): projections are a random unitary
// conjugation of index-ordered blocks with the given multiplicities.
inline freefunc::HerglotzRepresentation random_diagonal_rep(
    sampling::Rng& rng, const std::vector<Eigen::Index>& mult, int d) {
  Eigen::Index m = 0;
  for (auto s : mult) m += s;
  const CMat g = sampling::random_unitary(rng, m);
  std::vector<CMat> projections;
  Eigen::Index off = 0;
  for (auto s : mult) {
    CMat p = CMat::Zero(m, m);
    p.block(off, off, s, s) = CMat::Identity(s, s);
    off += s;
    projections.push_back(g * p * g.adjoint());
  }
  freefunc::HerglotzRepresentation rep;
  rep.alpha = UnitalEmbedding::diagonal(std::move(projections));
  rep.U = sampling::random_unitary(rng, m);
  rep.V = sampling::random_isometry(rng, m, d);
  return rep;
}

// Scalar one-atom representation: h(x) = (1 + e^{i theta} x)/(1 - e^{i theta} x).
inline freefunc::HerglotzRepresentation atom_rep(double theta) {
  freefunc::HerglotzRepresentation rep;
  rep.alpha = UnitalEmbedding::full(1, 1);
  rep.U = CMat::Constant(1, 1, std::polar(1.0, theta));
  rep.V = CMat::Constant(1, 1, Complex(1, 0));
  return rep;
}

inline double opdist(const CMat& a, const CMat& b) {
  return matrixcore::opnorm(a - b);
}

}  // namespace nch::testutil

#endif
