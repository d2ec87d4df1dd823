#ifndef NCH_LURKING_HPP
#define NCH_LURKING_HPP

// Forward synthesis of model data from a representation, Gramian assembly,
// lurking-isometry recovery of (U, V), and round-trip verification.

#include <vector>

#include "nch/algebra.hpp"
#include "nch/freefunc.hpp"
#include "nch/types.hpp"

namespace nch::lurking {

struct ModelSample {
  LeveledElement x;
  CMat h;        // dn x dn value of the function
  CMat v;        // mn x dn, v(X) = (I - K_delta)^{-1} 2 (V (x) I_n)
  CMat u_model;  // mn x dn, v = u_model (h + I)
};

// Model data for one function: the delta defining the contraction domain,
// the action of B on the model space (canonicalized at synthesis), and the
// per-sample triples.
struct ModelData {
  FreePolynomial delta;
  UnitalEmbedding model_embedding;  // canonical action of B on C^m
  std::vector<ModelSample> samples;

  Eigen::Index model_dim() const { return model_embedding.ambient_dim; }
  Eigen::Index output_dim() const {
    return samples.empty() ? 0 : samples.front().h.rows() / samples.front().x.level;
  }
};

struct RecoveryReport {
  double gram_residual = 0.0;
  double U_defect = 0.0;
  double V_defect = 0.0;
  double roundtrip_max_error = 0.0;
  int sample_count = 0;
  int fresh_sample_count = 0;
};

// Rewrites a representation on the same space so that B acts canonically
// (Full: b (x) I_s; Diagonal: index-ordered blocks); U and V are conjugated
// accordingly and the function value is unchanged.
freefunc::HerglotzRepresentation canonicalize(
    const freefunc::HerglotzRepresentation& rep, const Tolerance& tol = {});

// Evaluates h, v and u_model at each point.  Points must be strict
// delta-contractions with h + I invertible (automatic from Re h >= 0).
ModelData model_from_rep(const freefunc::HerglotzRepresentation& rep,
                         const FreePolynomial& delta,
                         const std::vector<LeveledElement>& points,
                         const Tolerance& tol = {});

// Residual of the model factorization identity at one sample for a level-n
// test matrix T:
//   (T - f* T f) - u*[T - delta(X)* T delta(X)] u,   f = Cayley(h),
// with T amplified to the output and model spaces.
double model_identity_residual(const ModelData& model, size_t sample_index,
                               const CMat& t, const Tolerance& tol = {});

struct GramianColumns {
  CMat phi;   // (d+m) x M stacked per-level columns of [h+I; delta(X) v]
  CMat theta; // (d+m) x M stacked per-level columns of [h-I; v]
  double gram_residual = 0.0;
};

// Reslices the samples into per-level column families and checks the
// Gramian identity; throws InconsistencyError ("model data inconsistent")
// when the residual exceeds the scaled tolerance.
GramianColumns build_gramian_columns(const ModelData& model,
                                     const Tolerance& tol = {});

// Lurking-isometry recovery: requires a sample at X = 0 (which forces the
// top-left block of L to vanish and normalizes V to an isometry).  Returns a
// representation on the model space with the model's embedding.
freefunc::HerglotzRepresentation recover_representation(
    const ModelData& model, const Tolerance& tol = {});

// Full pipeline: synthesize -> Gramian -> recover -> compare on fresh points
// at levels 1..3 (levels above the samples exercise the free extension).
RecoveryReport roundtrip_verify(const freefunc::HerglotzRepresentation& rep,
                                const FreePolynomial& delta, int sample_count,
                                int fresh_count,
                                unsigned long long seed = 1,
                                const Tolerance& tol = {});

}  // namespace nch::lurking

#endif
