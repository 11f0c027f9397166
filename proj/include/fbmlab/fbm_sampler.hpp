#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fbmlab/parallel_kernels.hpp"
#include "fbmlab/rng.hpp"
#include "fbmlab/sample_path.hpp"
#include "fbmlab/volterra_kernel.hpp"

namespace fbmlab {

enum class NoiseMethod { Cholesky, Volterra };

/// Largest grid accepted by the O(n^3) Cholesky route.
inline constexpr std::size_t kCholeskyMaxSteps = 8192;

/// Brownian path with W_0 = 0 and N(0, dt) increments. Draw order: coordinate
/// by coordinate, n_steps normals each.
SamplePath sample_bm(const TimeGrid& grid, std::size_t dim, RngStream& rng);

/// Lower Cholesky factor of the unit-step fractional Gaussian noise covariance
/// gamma(i-j) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2, k = i-j.
struct FgnFactor {
  Eigen::MatrixXd lower;
  bool jittered = false;
};

/// Cached per (H, n). Throws FactorizationError if the jittered retry fails too.
std::shared_ptr<const FgnFactor> fgn_cholesky_factor(double h, std::size_t n);

/// Exact fBm on the grid: increments dt^H * L z, cumulated. Consumes the same
/// normals as sample_bm.
SamplePath sample_fbm_cholesky(const KernelSpec& spec, const TimeGrid& grid, std::size_t dim,
                               RngStream& rng);

/// Cell-averaged kernel weights on the unit grid: entry (j-1, i) is
/// int_i^{i+1} K_H(j, s) ds for 0 <= i < j <= n. On a grid of step dt the
/// weights scale by dt^{H-1/2}.
Eigen::MatrixXd build_volterra_unit_weights(const KernelSpec& spec, std::size_t n,
                                            par::Exec exec = par::Exec::Parallel);

/// Cached variant of build_volterra_unit_weights.
std::shared_ptr<const Eigen::MatrixXd> volterra_unit_weights(const KernelSpec& spec, std::size_t n);

struct CoupledPaths {
  SamplePath w;
  SamplePath b;
};

/// Driving Brownian path w and b_j = sum_{i<j} kappa(t_j, i) (w_{i+1} - w_i).
CoupledPaths sample_fbm_volterra(const KernelSpec& spec, const TimeGrid& grid, std::size_t dim,
                                 RngStream& rng);

/// fBm path by the selected method (Cholesky requires the Volterra family).
SamplePath sample_fbm(NoiseMethod method, const KernelSpec& spec, const TimeGrid& grid,
                      std::size_t dim, RngStream& rng);

/// Generates fBm paths for blocks of consecutive replicas with one matrix
/// product per block. Replica r draws its normals from RngStream(seed, r) in the
/// same order as the single-path samplers. Output depends only on
/// (seed, first, count), so callers fix block boundaries independently of threads.
class FbmBatchSampler {
 public:
  static constexpr std::size_t kBlock = 64;

  FbmBatchSampler(NoiseMethod method, const KernelSpec& spec, const TimeGrid& grid, std::size_t dim);

  std::vector<SamplePath> sample(std::uint64_t seed, std::uint64_t first, std::size_t count) const;

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }

 private:
  NoiseMethod method_;
  TimeGrid grid_;
  std::size_t dim_;
  double scale_;
  std::shared_ptr<const FgnFactor> fgn_;
  std::shared_ptr<const Eigen::MatrixXd> volterra_;
};

}  // namespace fbmlab
