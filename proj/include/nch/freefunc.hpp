#ifndef NCH_FREEFUNC_HPP
#define NCH_FREEFUNC_HPP

// Herglotz representations over finite-dimensional algebras, their
// evaluation on the matrix ball, Cayley transforms between Herglotz and
// Schur data, free-function diagnostics and normalization.

#include <functional>
#include <optional>

#include "nch/algebra.hpp"
#include "nch/types.hpp"

namespace nch::freefunc {

// The realization data (alpha, U, V) plus an optional self-adjoint offset:
//   h(X) = i(T (x) I_n)
//        + (V* (x) I_n) (I + K)(I - K)^{-1} (V (x) I_n),
//   K = (U (x) I_n) * embed(alpha, X).
// V is an isometry, so h(0) = I + iT.
struct HerglotzRepresentation {
  UnitalEmbedding alpha;
  CMat U;                       // ambient_dim x ambient_dim unitary
  CMat V;                       // ambient_dim x d isometry
  std::optional<CMat> offset_T; // d x d Hermitian, zero when absent

  Eigen::Index ambient_dim() const { return U.rows(); }
  Eigen::Index output_dim() const { return V.cols(); }
};

// Checks all representation invariants; on failure throws StructuralError
// naming the violated one.
void validate(const HerglotzRepresentation& rep, const Tolerance& tol = {});

// Evaluates h at a strict contraction X (after embedding).  Throws
// DomainError when ||embed(X)|| >= 1 or the resolvent is too ill-conditioned.
CMat eval_herglotz(const HerglotzRepresentation& rep, const LeveledElement& x,
                   const Tolerance& tol = {});

// Same with the point pushed through delta first: h(X) built from
// embed(delta(X)).
CMat eval_herglotz_delta(const HerglotzRepresentation& rep,
                         const FreePolynomial& delta, const LeveledElement& x,
                         const Tolerance& tol = {});

// Truncated geometric expansion V*[I + 2 sum_{j<=order} K^j]V (no offset),
// used by the truncation-estimate checks.
CMat eval_herglotz_truncated(const HerglotzRepresentation& rep,
                             const LeveledElement& x, int order);

// F = (H - I)(H + I)^{-1}; contractive when Re H >= 0.
CMat cayley_to_schur(const CMat& h, const Tolerance& tol = {});

// H = (I + F)(I - F)^{-1}; inverse of the above.
CMat cayley_to_herglotz(const CMat& f, const Tolerance& tol = {});

struct FreeAxiomReport {
  double direct_sum_residual = 0.0;   // h(X (+) Y) vs h(X) (+) h(Y)
  double intertwine_residual = 0.0;   // Gamma h(X) vs h(Y) Gamma
  double similarity_residual = 0.0;   // h(P X P*) vs P h(X) P*
  int trials = 0;
};

// Random direct-sum / intertwining / permutation-similarity tests of the
// free-function axioms; diagnostic only.
FreeAxiomReport check_free_axioms(const HerglotzRepresentation& rep,
                                  int trials, unsigned long long seed = 1,
                                  const Tolerance& tol = {});

using Evaluator = std::function<CMat(const LeveledElement&)>;

Evaluator make_evaluator(const HerglotzRepresentation& rep,
                         const Tolerance& tol = {});

// Normalizes a Herglotz evaluator with value h0 = S + iT at zero so that the
// result is I at zero:  h^(X) = (S^{-1/2} (x) I)(-i(T (x) I) + h(X))(S^{-1/2} (x) I).
// Rejects degenerate S (smallest eigenvalue at or below tolerance).
Evaluator regularize(const CMat& h0, Evaluator h, const Tolerance& tol = {});

}  // namespace nch::freefunc

#endif
