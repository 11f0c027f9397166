#pragma once

#include "fbmlab/hurst.hpp"
#include "fbmlab/quadrature.hpp"

namespace fbmlab {

enum class KernelFamily { Volterra, Liouville };

/// Arguments with t - s below this are rejected instead of returning huge values.
inline constexpr double kKernelGuard = 1e-12;

/// Kernel family, Hurst index and normalization constant c_H.
///
/// For the Volterra family c_H is fixed at construction so that the process
/// B_t = int_0^t K_H(t,s) dW_s has Var(B_1) = 1. The Liouville family keeps c_H = 1.
class KernelSpec {
 public:
  KernelSpec(HurstParameter hurst, KernelFamily family, quad::QuadOptions quad = {});

  const HurstParameter& hurst() const noexcept { return hurst_; }
  double h() const noexcept { return hurst_.value(); }
  KernelFamily family() const noexcept { return family_; }
  double c_h() const noexcept { return c_h_; }
  const quad::QuadOptions& quad() const noexcept { return quad_; }

 private:
  HurstParameter hurst_;
  KernelFamily family_;
  quad::QuadOptions quad_;
  double c_h_ = 1.0;
};

/// K_H(t,s) for 0 < s < t.
double eval_kernel(const KernelSpec& spec, double t, double s);

/// dK_H(u,s)/du = c_H (H-1/2) (u/s)^{H-1/2} (u-s)^{H-3/2} for 0 < s < u
/// (Liouville: (H-1/2)(u-s)^{H-3/2}). Sign is that of H - 1/2.
double eval_kernel_time_derivative(const KernelSpec& spec, double u, double s);

/// int_0^t K_H(t,s)^2 ds. Equals t^{2H} for the normalized Volterra kernel.
double kernel_variance(const KernelSpec& spec, double t);

/// int_a^b K_H(t,s) ds with 0 <= a < b <= t; endpoint singularities at s=0 and s=t handled.
double kernel_cell_integral(const KernelSpec& spec, double t, double a, double b);

/// Kernel variance with the full quadrature report.
quad::QuadResult kernel_variance_report(const KernelSpec& spec, double t);

namespace detail {

/// Kernel with c_H = 1, taking t - s explicitly so callers near the diagonal
/// keep full relative precision. No guard.
double kernel_unit(double h, KernelFamily family, double t, double s, double t_minus_s,
                   const quad::QuadOptions& opts);

}  // namespace detail

}  // namespace fbmlab
