#ifndef NCH_BATCH_HPP
#define NCH_BATCH_HPP

// Batch kernels over sample sets.  Every kernel has a serial reference
// implementation and an OpenMP parallel one; the parallel version computes
// each sample independently and writes by index, so the two agree exactly
// and results are deterministic regardless of thread count.

#include <vector>

#include "nch/freefunc.hpp"
#include "nch/types.hpp"

namespace nch::batch {

enum class Exec { serial, parallel };

// h(X_i) for every point.
std::vector<CMat> eval_many(const freefunc::HerglotzRepresentation& rep,
                            const std::vector<LeveledElement>& points,
                            Exec exec = Exec::parallel,
                            const Tolerance& tol = {});

// lambda_min(Re h(X_i)) per point: the positivity scan.
std::vector<double> min_real_part_many(
    const freefunc::HerglotzRepresentation& rep,
    const std::vector<LeveledElement>& points, Exec exec = Exec::parallel,
    const Tolerance& tol = {});

// ||h_a(X_i) - h_b(X_i)|| per point: the agreement scan used by the
// non-uniqueness demos.
std::vector<double> pair_deviation_many(
    const freefunc::HerglotzRepresentation& rep_a,
    const freefunc::HerglotzRepresentation& rep_b,
    const std::vector<LeveledElement>& points, Exec exec = Exec::parallel,
    const Tolerance& tol = {});

int max_threads();

}  // namespace nch::batch

#endif
