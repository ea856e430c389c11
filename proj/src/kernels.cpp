#include "pqnorm/kernels.hpp"

namespace pqnorm::kernels {

CMatrix kron_serial(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  CMatrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

CMatrix kron_parallel(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  CMatrix out(ra * rb, ca * cb);
  const Eigen::Index blocks = ra * ca;
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < blocks; ++t) {
    const Eigen::Index i = t / ca, j = t % ca;
    out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  }
  return out;
}

std::vector<double> schatten_batch_serial(std::span<const CMatrix> mats, double p) {
  std::vector<double> out(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) out[i] = schatten_norm(mats[i], p);
  return out;
}

std::vector<double> schatten_batch_parallel(std::span<const CMatrix> mats, double p) {
  std::vector<double> out(mats.size());
  const auto n = static_cast<long>(mats.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = schatten_norm(mats[static_cast<std::size_t>(i)], p);
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace pqnorm::kernels
