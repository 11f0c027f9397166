#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fbmlab/parallel_kernels.hpp"
#include "fbmlab/stats.hpp"
#include "fbmlab/volterra_kernel.hpp"

namespace fbmlab::diag {

/// G^{(k)}_v = int_0^{min(1,v)} K_H(v+k-1, s+k-1) dW_s for v in the grid.
struct GProcessSpec {
  KernelSpec kernel;
  std::size_t k = 1;
  std::vector<double> v_grid;

  void validate() const;
};

/// E|G_v - G_v'|^2 = I1 + I2 with
///   I1 = int_0^{1 ^ v'} (K(v+k-1, s+k-1) - K(v'+k-1, s+k-1))^2 ds,
///   I2 = int_{1 ^ v'}^{1 ^ v} K(v+k-1, s+k-1)^2 ds.
/// Symmetric in (v, v'); both must lie in [0, 2].
quad::QuadResult g_increment_second_moment_report(const GProcessSpec& spec, double v, double v_prime);
double g_increment_second_moment(const GProcessSpec& spec, double v, double v_prime);

/// Hoelder exponent in the uniform increment bound: H below 1/2, H/2 above.
double holder_alpha(double h);
/// Reporting convention for the strictly smaller exponent of the path-norm statement.
inline double holder_alpha_prime(double h) { return 0.9 * holder_alpha(h); }

struct HolderRow {
  std::size_t k;
  double v;
  double v_prime;
  double second_moment;
  double ratio;  ///< second_moment / |v - v'|^{2 alpha_H}
};

struct HolderReport {
  double h = 0.0;
  double alpha = 0.0;
  double alpha_prime = 0.0;
  std::vector<std::size_t> k_values;
  std::vector<double> sup_ratio;  ///< per k
  std::vector<HolderRow> rows;
  /// (max - min) / min of sup_ratio over k >= 4.
  double variation_beyond_4 = 0.0;
  bool finite = false;
  bool pass = false;
};

/// Sup ratio over all pairs v' < v of `grid` (defaults to step 1/8 on [0,2]) for each k.
HolderReport check_g_holder_bound(const KernelSpec& kernel, const std::vector<std::size_t>& k_values,
                                  const std::vector<double>& grid = {},
                                  par::Exec exec = par::Exec::Parallel);

/// int_0^1 s^{1-2H} ((1 - v s)^{H-3/2} - (1 - v' s)^{H-3/2})^2 ds for 0 <= v' <= v <= 1/2.
double gtilde_increment_second_moment(double h, double v, double v_prime);

/// Weights mapping Brownian increments on `cells` uniform cells of [0,1] to G^{(k)}
/// on the v grid: row j, column i is int over cell i (clipped to [0, min(1,v_j)]) of
/// K(v_j+k-1, s+k-1) ds divided by the cell width.
Eigen::MatrixXd g_process_weights(const GProcessSpec& spec, std::size_t cells);

/// Sample G^{(k)} at the v grid for replicas [first, first+count); row r of the result
/// is replica r. Replica r uses RngStream(seed, first + r).
Eigen::MatrixXd sample_g_process(const GProcessSpec& spec, std::size_t cells, std::uint64_t seed,
                                 std::uint64_t first, std::size_t count,
                                 par::Exec exec = par::Exec::Parallel);

/// Smallest C_d with 4 d (1 - Phi(x)) <= C_d exp(-x^2/4) for all x >= 0. The
/// supremum of 4 d (1 - Phi(x)) e^{x^2/4} sits at x = 0, so C_d = 2 d.
inline double sub_gaussian_constant(std::size_t dim) { return 2.0 * static_cast<double>(dim); }

/// Per-path suprema of a d-dimensional Brownian motion on [0,1].
struct SupSamples {
  std::vector<double> sup_norm;         ///< sup_t |W_t| on the full grid
  std::vector<double> sup_norm_coarse;  ///< same paths, every second grid point
  std::vector<double> sup_first;        ///< sup_t W^1_t (one-sided, first coordinate)
  std::uint64_t seed = 0;
  std::uint64_t first = 0;
};

SupSamples sample_bm_suprema(std::size_t dim, std::size_t n_paths, std::size_t n_steps,
                             std::uint64_t seed, std::uint64_t first = 0,
                             par::Exec exec = par::Exec::Parallel);

struct SupTail {
  double x = 0.0;
  std::size_t dim = 1;
  McEstimate two_sided;       ///< P(sup |W| > x)
  McEstimate two_sided_coarse;
  McEstimate one_sided;       ///< P(sup W^1 > x)
  double reflection_bound = 0.0;    ///< 4 d (1 - Phi(x))
  double sub_gaussian_bound = 0.0;  ///< C_d exp(-x^2/4)
  /// |two_sided - two_sided_coarse|: discretization allowance from halving the grid.
  double discretization_allowance = 0.0;
  /// True when halving the step moved the estimate by less than half a standard error.
  bool discretization_settled = false;
};

SupTail sup_bm_tail(const SupSamples& samples, double x, std::size_t dim);

/// Exact P(sup_{[0,1]} |W| < x) for one-dimensional Brownian motion (series).
double bm_abs_sup_below(double x);

struct SupMoment {
  int p = 2;
  std::size_t dim = 1;
  McEstimate estimate;  ///< E[sup |W|^p]
  double eta = 0.25;
  double eta_prime = 2.0;
  double comparator = 0.0;  ///< (eta'/2) (1/eta)^{p/2} p Gamma(p/2)
};

SupMoment sup_bm_moment(const SupSamples& samples, int p, std::size_t dim, double eta = 0.25,
                        double eta_prime = -1.0);

/// (eta'/2) (1/eta)^{p/2} p Gamma(p/2).
double sup_moment_comparator(int p, double eta, double eta_prime);

}  // namespace fbmlab::diag
