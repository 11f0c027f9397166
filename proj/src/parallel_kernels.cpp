#include "fbmlab/parallel_kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace fbmlab::par {

void set_threads(int n) {
  if (n < 1) throw std::invalid_argument("thread count must be >= 1");
  omp_set_num_threads(n);
}

int threads() { return omp_get_max_threads(); }

int threads_from_env(int fallback) {
  if (const char* env = std::getenv("FBM_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

void lower_triangular_apply(Exec exec, const Eigen::MatrixXd& l, std::span<const double> x,
                            std::span<double> y) {
  const auto n = static_cast<std::size_t>(l.rows());
  if (x.size() != n || y.size() != n) throw std::invalid_argument("lower_triangular_apply: size mismatch");
  for_each(exec, n, [&](std::size_t j) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= j; ++i)
      acc += l(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * x[i];
    y[j] = acc;
  });
}

}  // namespace fbmlab::par
