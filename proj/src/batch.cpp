#include "nch/batch.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nch/matrixcore.hpp"

namespace nch::batch {

namespace {

// Runs fn(i) for every index, optionally under OpenMP.  Exceptions cannot
// cross the parallel region, so the first one is captured and rethrown.
template <typename Fn>
void for_each_index(Eigen::Index count, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<CMat> eval_many(const freefunc::HerglotzRepresentation& rep,
                            const std::vector<LeveledElement>& points,
                            Exec exec, const Tolerance& tol) {
  std::vector<CMat> out(points.size());
  for_each_index(static_cast<Eigen::Index>(points.size()), exec,
                 [&](Eigen::Index i) {
                   out[static_cast<size_t>(i)] =
                       freefunc::eval_herglotz(rep, points[static_cast<size_t>(i)], tol);
                 });
  return out;
}

std::vector<double> min_real_part_many(
    const freefunc::HerglotzRepresentation& rep,
    const std::vector<LeveledElement>& points, Exec exec,
    const Tolerance& tol) {
  std::vector<double> out(points.size());
  for_each_index(static_cast<Eigen::Index>(points.size()), exec,
                 [&](Eigen::Index i) {
                   const CMat h = freefunc::eval_herglotz(
                       rep, points[static_cast<size_t>(i)], tol);
                   out[static_cast<size_t>(i)] = matrixcore::min_real_eig(h);
                 });
  return out;
}

std::vector<double> pair_deviation_many(
    const freefunc::HerglotzRepresentation& rep_a,
    const freefunc::HerglotzRepresentation& rep_b,
    const std::vector<LeveledElement>& points, Exec exec,
    const Tolerance& tol) {
  std::vector<double> out(points.size());
  for_each_index(
      static_cast<Eigen::Index>(points.size()), exec, [&](Eigen::Index i) {
        const auto& x = points[static_cast<size_t>(i)];
        const CMat ha = freefunc::eval_herglotz(rep_a, x, tol);
        const CMat hb = freefunc::eval_herglotz(rep_b, x, tol);
        out[static_cast<size_t>(i)] = matrixcore::opnorm(ha - hb);
      });
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace nch::batch
