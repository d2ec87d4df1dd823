#ifndef NCH_CLASSICAL_HPP
#define NCH_CLASSICAL_HPP

// The scalar specialization: atomic probability measures on the unit circle,
// their Herglotz transform, circle moments, Toeplitz positivity, and the
// bridge to finite representations.

#include <vector>

#include "nch/freefunc.hpp"
#include "nch/types.hpp"

namespace nch::classical {

struct Atom {
  double theta = 0.0;   // radians, reduced to [0, 2*pi)
  double weight = 0.0;  // nonnegative
};

struct CircleMeasure {
  std::vector<Atom> atoms;
};

// Checks weights >= 0 summing to one and distinct angles mod 2*pi.
void validate(const CircleMeasure& mu, const Tolerance& tol = {});

// h(x) = sum w_j (1 + e^{i theta_j} x) / (1 - e^{i theta_j} x), |x| < 1.
Complex herglotz_transform(const CircleMeasure& mu, Complex x);

// m_n = sum w_j e^{i n theta_j} for n = 0..N (so m_0 = 1).
std::vector<Complex> moments_of(const CircleMeasure& mu, int n_max);

struct ToeplitzReport {
  bool ok = false;
  double lambda_min = 0.0;
};

// Caratheodory-Toeplitz positivity of the moment sequence m_0..m_N:
// T_{ij} = m_{i-j} with m_{-n} = conj(m_n).
ToeplitzReport toeplitz_psd_check(const std::vector<Complex>& m,
                                  const Tolerance& tol = {});

// U = diag(e^{i theta_j}), V = (sqrt(w_j))_j, d = 1 over B = C.
freefunc::HerglotzRepresentation rep_from_measure(const CircleMeasure& mu,
                                                  const Tolerance& tol = {});

// Taylor coefficients of h at 0 via circle quadrature: independent oracle
// for moments_of, using only transform evaluations.
std::vector<Complex> taylor_moments_quadrature(const CircleMeasure& mu,
                                               int n_max, double radius = 0.5,
                                               int nodes = 128);

}  // namespace nch::classical

#endif
