#ifndef NCH_TYPES_HPP
#define NCH_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nch {

// Dense complex matrices are the universal numeric carrier; every operator
// (U, V, L, h(X), ...) is one of these.
using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Absolute/relative tolerance pair used by all structure checks.  Scaled
// thresholds are absolute + relative * scale.
struct Tolerance {
  double absolute = 1e-10;
  double relative = 1e-8;

  double scaled(double scale) const { return absolute + relative * scale; }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed inputs: dimension mismatches, broken invariants, bad files.
struct StructuralError : Error {
  using Error::Error;
};

// Inputs outside an operation's mathematical domain (norm >= 1, singular
// pivots, degenerate real parts, spectral conditions).
struct DomainError : Error {
  using Error::Error;
};

// Data that should satisfy an identity but does not (Gram mismatches,
// inconsistent model data).
struct InconsistencyError : Error {
  using Error::Error;
};

inline bool is_finite(const CMat& m) { return m.allFinite(); }

inline void require_finite(const CMat& m, const std::string& what) {
  if (!m.allFinite()) throw StructuralError(what + ": non-finite entries");
}

}  // namespace nch

#endif
