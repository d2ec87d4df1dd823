// Benchmark comparing the serial and OpenMP batch kernels on a batch of
// Herglotz evaluations.  Prints per-kernel timings and the speedup, and
// verifies the two paths produce identical results.

#include <chrono>
#include <cstdio>
#include <vector>

#include "nch/batch.hpp"
#include "nch/freefunc.hpp"
#include "nch/matrixcore.hpp"
#include "nch/sampling.hpp"

using namespace nch;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

freefunc::HerglotzRepresentation make_rep(sampling::Rng& rng, int k, int s,
                                          int d) {
  freefunc::HerglotzRepresentation rep;
  rep.alpha = UnitalEmbedding::full(k, s, sampling::random_unitary(rng, k * s));
  rep.U = sampling::random_unitary(rng, k * s);
  rep.V = sampling::random_isometry(rng, k * s, d);
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  int points = 256;
  int level = 2;
  int s = 24;
  if (argc > 1) points = std::atoi(argv[1]);
  if (argc > 2) level = std::atoi(argv[2]);
  if (argc > 3) s = std::atoi(argv[3]);

  sampling::Rng rng(7);
  const int k = 2;
  const auto rep = make_rep(rng, k, s, 2);

  std::vector<LeveledElement> batch;
  for (int i = 0; i < points; ++i)
    batch.push_back(
        sampling::random_ball_point(rng, rep.alpha.algebra, level, 0.3, 0.8));

  std::printf("batch eval: %d points, level %d, ambient dim %d, %d threads\n",
              points, level, k * s, batch::max_threads());

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = batch::eval_many(rep, batch, batch::Exec::serial);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = batch::eval_many(rep, batch, batch::Exec::parallel);
  const double t_parallel = seconds_since(t0);

  double max_diff = 0.0;
  for (size_t i = 0; i < serial.size(); ++i)
    max_diff = std::max(
        max_diff, (serial[i] - parallel[i]).cwiseAbs().maxCoeff());

  std::printf("  serial:   %8.3f ms\n", 1e3 * t_serial);
  std::printf("  parallel: %8.3f ms\n", 1e3 * t_parallel);
  std::printf("  speedup:  %8.2fx\n", t_serial / t_parallel);
  std::printf("  max |serial - parallel| = %.3e\n", max_diff);
  return max_diff == 0.0 ? 0 : 1;
}
