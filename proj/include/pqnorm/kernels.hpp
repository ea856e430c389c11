#pragma once

// Data-parallel kernels. Every OpenMP kernel has a serial reference with the
// same signature; tests compare the two and bench/ times them.

#include "pqnorm/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pqnorm {

enum class Execution { serial, parallel };

namespace kernels {

CMatrix kron_serial(const CMatrix& a, const CMatrix& b);
CMatrix kron_parallel(const CMatrix& a, const CMatrix& b);

std::vector<double> schatten_batch_serial(std::span<const CMatrix> mats, double p);
std::vector<double> schatten_batch_parallel(std::span<const CMatrix> mats, double p);

inline std::vector<double> schatten_batch(std::span<const CMatrix> mats, double p,
                                          Execution exec = Execution::parallel) {
  return exec == Execution::serial ? schatten_batch_serial(mats, p)
                                   : schatten_batch_parallel(mats, p);
}

int max_threads();

}  // namespace kernels

/// Evaluates fn(i) for i in [0, count) and returns the results in index order.
/// The parallel path only changes scheduling, never the result.
template <class Result, class Fn>
std::vector<Result> map_indices(int count, Fn&& fn, Execution exec = Execution::parallel) {
  std::vector<Result> out(static_cast<std::size_t>(count > 0 ? count : 0));
  if (exec == Execution::serial || count < 2) {
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
  return out;
}

}  // namespace pqnorm
