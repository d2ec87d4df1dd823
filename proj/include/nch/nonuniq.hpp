#ifndef NCH_NONUNIQ_HPP
#define NCH_NONUNIQ_HPP

// Finite-truncation generators witnessing non-uniqueness of Herglotz
// representations: pairs of distinct states (or distinct conditional
// expectations) whose functions agree through high order.  The circle, the
// integers and their crossed products are truncated to cyclic groups, so
// exact vanishing statements become tail bounds 2 ||X||^N / (1 - ||X||).

#include <utility>
#include <vector>

#include "nch/algebra.hpp"
#include "nch/freefunc.hpp"
#include "nch/types.hpp"

namespace nch::nonuniq {

// psi(b) = Q b Q* for Full algebras, or coordinate precomposition
// b |-> diag(b_{sigma(0)}, ..., b_{sigma(k-1)}) for Diagonal ones.
// Bijective sigma gives an automorphism; arbitrary self-maps give the
// endomorphisms of the shift construction.
struct AlgebraMap {
  AlgebraDescriptor algebra;
  CMat conjugator;            // Full only
  std::vector<int> self_map;  // Diagonal only, 0-based

  static AlgebraMap inner(const CMat& q);
  static AlgebraMap coordinate(int k, std::vector<int> sigma);
  static AlgebraMap identity(const AlgebraDescriptor& alg);

  CMat apply(const CMat& b) const;
  CMat iterate(const CMat& b, int times) const;
  bool is_automorphism() const;
};

// Order-N truncation parameter for the cyclic approximations.
void validate_truncation(int n);

// Two operator-valued states from scalar states phi_j = trace(rho_j .) on B,
// averaged over the (truncated) circle action.  Their mixed moments of
// u-degree in (0, N) vanish, so both functions agree with I through order
// N-1, yet balanced words such as u b u* still see trace(rho_j b).
std::pair<freefunc::HerglotzRepresentation, freefunc::HerglotzRepresentation>
haar_pair_states(const AlgebraDescriptor& alg, const CMat& rho1,
                 const CMat& rho2, int n, const Tolerance& tol = {});

// Cyclic truncation of B x|_psi Z for an automorphism psi with psi^N = id:
// alpha(b) = blockdiag(b, psi(b), ..., psi^{N-1}(b)), U the cyclic shift
// oriented so that U alpha(b) U* = alpha(psi(b)), V the inclusion at block
// zero.  The induced state is a conditional expectation with
// phi(u b u*) = psi(b).
freefunc::HerglotzRepresentation crossed_product_expectation(
    const AlgebraMap& psi, int n, const Tolerance& tol = {});

// The rigid-case construction for Diagonal algebras and an arbitrary
// coordinate self-map: block b at position zero and psi(b) elsewhere on a
// cyclic window of size 2N+1, U the shift.  Conditional expectation with
// phi(u* b u) = psi(b) and mixed moments vanishing for u-degree in
// (0, 2N+1).
freefunc::HerglotzRepresentation shift_endomorphism_expectation(
    const AlgebraMap& psi, int n, const Tolerance& tol = {});

}  // namespace nch::nonuniq

#endif
