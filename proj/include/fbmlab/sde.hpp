#pragma once

#include <Eigen/Dense>

#include "fbmlab/drift.hpp"
#include "fbmlab/sample_path.hpp"
#include "fbmlab/volterra_kernel.hpp"

namespace fbmlab {

/// dY = b(Y) dt + sigma dB, Y_0 = x0, B an fBm with the given kernel.
struct SdeSpec {
  DriftModel drift;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd x0;
  KernelSpec kernel;

  std::size_t dim() const noexcept { return drift.dim(); }
  /// Operator (spectral) norm of sigma, the |sigma| of the bound formulas.
  double sigma_norm() const;
  void validate() const;
};

/// Explicit Euler in the drift, exact in the additive noise:
/// Y_{j+1} = Y_j + b(Y_j) dt + sigma (B_{j+1} - B_j).
/// Throws IntegrationError with the step index if the state stops being finite.
SamplePath integrate(const SdeSpec& spec, const SamplePath& fbm);

}  // namespace fbmlab
