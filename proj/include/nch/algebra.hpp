#ifndef NCH_ALGEBRA_HPP
#define NCH_ALGEBRA_HPP

// Finite-dimensional coefficient algebras, leveled points of the matrix
// universe over them, unital embeddings into a bigger matrix algebra, and
// free *-polynomials used as the delta of delta-contraction domains.

#include <optional>
#include <vector>

#include "nch/types.hpp"

namespace nch {

enum class AlgebraKind { Full, Diagonal };

// B = M_k(C) (Full) or C^k embedded as diagonal k x k matrices (Diagonal).
struct AlgebraDescriptor {
  AlgebraKind kind = AlgebraKind::Full;
  int k = 1;

  bool operator==(const AlgebraDescriptor&) const = default;
};

// A point X in M_n(B): the flat nk x nk matrix, read as an n x n grid of
// k x k blocks.  For Diagonal algebras every block must be diagonal.
struct LeveledElement {
  AlgebraDescriptor algebra;
  int level = 1;
  CMat matrix;
};

// Validates dimensions and (for Diagonal) the diagonal-block constraint.
LeveledElement make_leveled(const AlgebraDescriptor& alg, int level, CMat m,
                            const Tolerance& tol = {});

LeveledElement zero_element(const AlgebraDescriptor& alg, int level);

// Block-diagonal direct sum; levels add.
LeveledElement direct_sum(const LeveledElement& x, const LeveledElement& y);

// A unital *-representation of B on C^m.
//   Full(k):     alpha(b) = W (b (x) I_s) W*  with W unitary, m = k s.
//   Diagonal(k): alpha(e_j) = P_j for pairwise-orthogonal projections
//                summing to the identity.
struct UnitalEmbedding {
  AlgebraDescriptor algebra;
  Eigen::Index ambient_dim = 0;

  // Full data
  Eigen::Index multiplicity = 0;  // s
  CMat conjugator;                // W, ambient_dim x ambient_dim

  // Diagonal data
  std::vector<CMat> projections;

  static UnitalEmbedding full(int k, Eigen::Index s, CMat w = CMat());
  static UnitalEmbedding diagonal(std::vector<CMat> projections,
                                  const Tolerance& tol = {});
  // Diagonal embedding with index-ordered blocks of the given multiplicities.
  static UnitalEmbedding diagonal_canonical(const std::vector<Eigen::Index>& mult);

  // alpha applied to a single k x k algebra element.
  CMat apply(const CMat& b) const;

  // Checks W unitary / projection axioms.
  void validate(const Tolerance& tol = {}) const;
};

// (alpha (x) 1_n)(X): entrywise application of alpha to the block grid,
// giving an mn x mn matrix with the level as outer block index.
CMat embed(const UnitalEmbedding& alpha, const LeveledElement& x);

// Amplify an operator on the coefficient space to level n (level-outer
// layout, i.e. kron(I_n, op)).
CMat amplify(const CMat& op, int level);

// A free *-polynomial with k x k left coefficients and words in {X, X*};
// the constant term is absent, so delta(0) = 0 by construction.
struct FreePolynomial {
  struct Term {
    CMat coeff;                // k x k (diagonal for Diagonal algebras)
    std::vector<bool> stars;   // word over {X (false), X* (true)}, nonempty
  };
  AlgebraDescriptor algebra;
  std::vector<Term> terms;

  static FreePolynomial identity(const AlgebraDescriptor& alg);
  // delta(X) = X^p
  static FreePolynomial power(const AlgebraDescriptor& alg, int p);

  LeveledElement eval(const LeveledElement& x) const;
};

}  // namespace nch

#endif
