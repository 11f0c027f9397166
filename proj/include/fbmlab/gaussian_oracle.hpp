#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "fbmlab/parallel_kernels.hpp"
#include "fbmlab/sde.hpp"

namespace fbmlab::oracle {

/// dY = (-A Y + c) dt + sigma dB with B a d-dimensional fBm of index h. Y is
/// Gaussian, so the occupation average of its first coordinate is Gaussian too.
struct LinearGaussianModel {
  Eigen::MatrixXd a;
  Eigen::MatrixXd sigma;
  double h = 0.5;
};

/// Model of a linear-drift SDE; throws DomainError for any other drift kind.
LinearGaussianModel model_from(const SdeSpec& spec);

/// Var of (1/n) sum_{k=b+1}^{b+n} Y^1_{k delta}.
double discrete_variance(const LinearGaussianModel& m, double delta, std::size_t n,
                         std::size_t burn_in = 0, par::Exec exec = par::Exec::Parallel);

/// Var of (1/T) int_{b delta}^{b delta + T} Y^1_t dt with T = n delta.
double continuous_variance(const LinearGaussianModel& m, double delta, std::size_t n,
                           std::size_t burn_in = 0, par::Exec exec = par::Exec::Parallel);

}  // namespace fbmlab::oracle
