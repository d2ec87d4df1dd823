#ifndef NCH_SAMPLING_HPP
#define NCH_SAMPLING_HPP

// Seeded random generators for matrices, ball points and representations.
// All randomness in the toolkit flows through Rng so runs are reproducible.

#include <cstdint>
#include <random>

#include "nch/algebra.hpp"
#include "nch/types.hpp"

namespace nch::sampling {

constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  Complex cgaussian() { return Complex(gaussian(), gaussian()); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Entrywise standard complex Gaussian.
CMat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Haar-style random unitary: QR of a Gaussian with phase-fixed diagonal.
CMat random_unitary(Rng& rng, Eigen::Index n);

// Random isometry (first d columns of a random unitary), rows >= cols.
CMat random_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Random Hermitian with entries O(1).
CMat random_hermitian(Rng& rng, Eigen::Index n);

// Random density matrix (PSD, trace one).
CMat random_density(Rng& rng, Eigen::Index n);

// Random point of M_level(B) rescaled to the target operator norm; Gaussian
// entries, diagonal blocks for Diagonal algebras.  Norms in [0.3, 0.9]
// exercise the resolvent both away from and near the boundary.
LeveledElement random_ball_point(Rng& rng, const AlgebraDescriptor& alg,
                                 int level, double norm_lo = 0.3,
                                 double norm_hi = 0.9);

// Same but with an exact target norm.
LeveledElement random_ball_point_norm(Rng& rng, const AlgebraDescriptor& alg,
                                      int level, double target_norm);

}  // namespace nch::sampling

#endif
