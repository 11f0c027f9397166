#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "fbmlab/errors.hpp"
#include "fbmlab/rng.hpp"

namespace fbmlab {

/// Drift b of a contractive additive SDE together with its dissipativity
/// constant alpha (<b(x)-b(y), x-y> <= -alpha |x-y|^2) and Lipschitz constant lip.
class DriftModel {
 public:
  enum class Kind { Linear, PerturbedLinear, Custom };
  using Function = std::function<void(std::span<const double> x, std::span<double> out)>;

  /// b(x) = -A x + c. alpha is the smallest eigenvalue of (A + A^T)/2, lip the operator norm of A.
  static DriftModel linear(Eigen::MatrixXd a, Eigen::VectorXd c);
  /// b(x) = -alpha0 x + eps sin(x) coordinate-wise; requires 0 <= eps < alpha0.
  static DriftModel perturbed_linear(double alpha0, double eps, std::size_t dim);
  /// Arbitrary drift with declared constants (checked only by validate_drift).
  static DriftModel custom(Function f, std::size_t dim, double alpha, double lip);

  void eval(std::span<const double> x, std::span<double> out) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  double lip() const noexcept { return lip_; }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  const Eigen::VectorXd& offset() const noexcept { return c_; }
  double alpha0() const noexcept { return alpha0_; }
  double eps() const noexcept { return eps_; }

 private:
  DriftModel(Kind kind, std::size_t dim, double alpha, double lip);

  Kind kind_;
  std::size_t dim_;
  double alpha_;
  double lip_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd c_;
  double alpha0_ = 0.0;
  double eps_ = 0.0;
  Function fn_;
};

struct ValidationReport {
  std::size_t probes = 0;
  double max_one_sided = 0.0;  ///< max <b(x)-b(y), x-y> / |x-y|^2
  double max_lip_ratio = 0.0;  ///< max |b(x)-b(y)| / |x-y|
  bool one_sided_ok = false;
  bool lipschitz_ok = false;
  bool pass() const noexcept { return one_sided_ok && lipschitz_ok; }
};

/// Probes the declared constants on pairs drawn uniformly from the ball of the given radius.
ValidationReport validate_drift(const DriftModel& model, std::size_t probe_count, double radius,
                                RngStream& rng);

}  // namespace fbmlab
