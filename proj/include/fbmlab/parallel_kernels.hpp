#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fbmlab::par {

/// Every hot loop in the library has a plain serial reference and an OpenMP
/// variant selected by this tag. Both produce bit-identical results: parallel
/// work is split into independent items and any reduction runs afterwards in
/// item order.
enum class Exec { Serial, Parallel };

void set_threads(int n);
int threads();
/// FBM_LAB_THREADS if set and valid, otherwise `fallback`.
int threads_from_env(int fallback);

template <class Fn>
void for_each(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(fbmlab_for_each_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

/// Calls fn(begin, end) on consecutive chunks [0,chunk), [chunk,2 chunk), ... of [0,n).
/// Chunk boundaries never depend on the thread count.
template <class Fn>
void for_each_chunk(Exec exec, std::size_t n, std::size_t chunk, Fn&& fn) {
  if (chunk == 0) chunk = 1;
  const std::size_t count = (n + chunk - 1) / chunk;
  for_each(exec, count, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    fn(begin, std::min(n, begin + chunk));
  });
}

/// Evaluates fn(i) for every item and sums the results in index order.
template <class Fn>
double ordered_sum(Exec exec, std::size_t n, Fn&& fn) {
  std::vector<double> part(n, 0.0);
  for_each(exec, n, [&](std::size_t i) { part[i] = fn(i); });
  double s = 0.0;
  for (double v : part) s += v;
  return s;
}

/// Strictly lower-triangular n x n matrix with W(j,i) = fn(j,i) for i < j.
template <class Fn>
Eigen::MatrixXd lower_triangular_fill(Exec exec, std::size_t n, Fn&& fn) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for_each(exec, n, [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i)
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = fn(j, i);
  });
  return w;
}

/// y_j = sum_{i <= j} L(j,i) x_i for a lower-triangular L, accumulated in i order per row.
void lower_triangular_apply(Exec exec, const Eigen::MatrixXd& l, std::span<const double> x,
                            std::span<double> y);

}  // namespace fbmlab::par
