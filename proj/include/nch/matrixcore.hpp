#ifndef NCH_MATRIXCORE_HPP
#define NCH_MATRIXCORE_HPP

// Dense complex linear algebra kernel: structure validation, unitary
// completion, lurking-isometry solving and the block Schur-complement
// unitary.  Everything here is a pure function of its inputs.

#include <vector>

#include "nch/types.hpp"

namespace nch::matrixcore {

enum class StructureKind {
  hermitian,
  psd,
  contraction_strict,
  contraction_weak,
  unitary,
  isometry,
  nilpotent_superdiag,
};

struct StructureReport {
  bool ok = false;
  double defect = 0.0;
};

// Operator (spectral) norm.
double opnorm(const CMat& m);

// Smallest singular value.
double sigma_min(const CMat& m);

// Smallest eigenvalue of the Hermitian part (M + M*)/2.
double min_real_eig(const CMat& m);

// Distance of M to the asserted structure.  ok iff the defect is below the
// tolerance scaled by max(1, ||M||).
StructureReport validate_structure(const CMat& m, StructureKind kind,
                                   const Tolerance& tol = {});

const char* structure_name(StructureKind kind);

// Extends an m x d isometry to an m x m unitary whose first d columns are V.
// The remaining columns come from orthonormalizing the standard basis
// against range(V) in index order, so the result is reproducible.
CMat unitary_completion(const CMat& v, const Tolerance& tol = {});

// Given column families with equal Gramians (phi and theta as h x M column
// stacks), returns a unitary L with L * phi_i = theta_i.  The completion off
// span(phi) is the deterministic unitary_completion of the induced partial
// isometry.  Throws InconsistencyError when the Gramians disagree beyond the
// scaled tolerance; rank decisions use singular values > relative * sigma_max.
CMat lurking_isometry(const CMat& phi_cols, const CMat& theta_cols,
                      const Tolerance& tol = {});

struct SchurComplementResult {
  CMat U;      // d2 x d2, unitary when L is
  CMat V_raw;  // C (I + A)^{-1}, kept for downstream isometry checks
};

// Block Schur-complement unitary of L = [[A,B],[C,D]] with A of size d1:
// U = D - C (I + A)^{-1} B.  Requires both A - I and A + I to be
// comfortably nonsingular (the spectral condition); violating either raises
// DomainError.
SchurComplementResult schur_complement_unitary(const CMat& l, Eigen::Index d1,
                                               const Tolerance& tol = {});

}  // namespace nch::matrixcore

#endif
