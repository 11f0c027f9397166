#include "fbmlab/volterra_kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace fbmlab {

namespace detail {
namespace {

// int_s^{s+d} u^{H-3/2} (u-s)^{H-1/2} du after u = s + d w^p, p = 1/(H+1/2):
//   p d^{H+1/2} int_0^1 (s + d w^p)^{H-3/2} dw.
// For s << d the integrand decays from s^{H-3/2} over w ~ (s/d)^{H+1/2}; the
// interval is split geometrically from that scale so each piece stays smooth.
double inner_integral(double h, double s, double d, const quad::QuadOptions& opts) {
  const double p = 1.0 / (h + 0.5);
  auto g = [&](double w) { return std::pow(s + d * std::pow(w, p), h - 1.5); };
  const double w_star = std::pow(s / d, h + 0.5);
  quad::QuadResult acc;
  if (w_star < 0.25) {
    acc += quad::integrate(g, 0.0, w_star, opts, "kernel inner integral");
    double lo = w_star;
    while (lo < 1.0) {
      const double hi = std::min(1.0, 4.0 * lo);
      acc += quad::integrate(g, lo, hi, opts, "kernel inner integral");
      lo = hi;
    }
  } else {
    acc = quad::integrate(g, 0.0, 1.0, opts, "kernel inner integral");
  }
  return p * std::pow(d, h + 0.5) * acc.value;
}

}  // namespace

double kernel_unit(double h, KernelFamily family, double t, double s, double t_minus_s,
                   const quad::QuadOptions& opts) {
  const double e = h - 0.5;
  if (family == KernelFamily::Liouville) return std::pow(t_minus_s, e);
  if (e == 0.0) return 1.0;
  const double first = std::pow(t / s, e) * std::pow(t_minus_s, e);
  const double second = e * std::pow(s, -e) * inner_integral(h, s, t_minus_s, opts);
  return first - second;
}

}  // namespace detail

namespace {

quad::QuadOptions inner_options(const quad::QuadOptions& outer) {
  quad::QuadOptions in = outer;
  in.rel_tol = std::min(outer.rel_tol, 1e-11);
  in.abs_tol = 0.0;
  return in;
}

quad::QuadResult unit_variance(double h, KernelFamily family, double t,
                               const quad::QuadOptions& opts) {
  const auto in = inner_options(opts);
  auto f = [&](const quad::Point& p) {
    const double k = detail::kernel_unit(h, family, t, p.x, p.from_right, in);
    return k * k;
  };
  const double left = family == KernelFamily::Volterra ? -std::abs(2.0 * h - 1.0) : 0.0;
  const double right = 2.0 * h - 1.0;
  return quad::integrate_algebraic(f, 0.0, t, left, right, opts, "kernel variance quadrature");
}

double normalization_constant(double h, const quad::QuadOptions& opts) {
  if (h == 0.5) return 1.0;
  static std::mutex mu;
  static std::map<std::tuple<double, double, double>, double> cache;
  const auto key = std::make_tuple(h, opts.rel_tol, opts.abs_tol);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double v = unit_variance(h, KernelFamily::Volterra, 1.0, opts).value;
  const double c = 1.0 / std::sqrt(v);
  std::lock_guard lock(mu);
  cache.emplace(key, c);
  return c;
}

void check_pair(double t, double s) {
  if (!(t > 0.0) || !(s > 0.0) || !(s < t)) throw DomainError("kernel requires 0 < s < t");
  if (t - s < kKernelGuard) throw DomainError("kernel argument within guard distance of the diagonal");
}

}  // namespace

KernelSpec::KernelSpec(HurstParameter hurst, KernelFamily family, quad::QuadOptions quad)
    : hurst_(hurst), family_(family), quad_(quad) {
  if (family_ == KernelFamily::Volterra) c_h_ = normalization_constant(hurst_.value(), quad_);
}

double eval_kernel(const KernelSpec& spec, double t, double s) {
  check_pair(t, s);
  return spec.c_h() *
         detail::kernel_unit(spec.h(), spec.family(), t, s, t - s, inner_options(spec.quad()));
}

double eval_kernel_time_derivative(const KernelSpec& spec, double u, double s) {
  check_pair(u, s);
  const double e = spec.h() - 0.5;
  const double base = e * std::pow(u - s, e - 1.0);
  if (spec.family() == KernelFamily::Liouville) return base;
  return spec.c_h() * std::pow(u / s, e) * base;
}

quad::QuadResult kernel_variance_report(const KernelSpec& spec, double t) {
  if (!(t > 0.0)) throw DomainError("kernel variance requires t > 0");
  auto r = unit_variance(spec.h(), spec.family(), t, spec.quad());
  const double c2 = spec.c_h() * spec.c_h();
  r.value *= c2;
  r.error *= c2;
  return r;
}

double kernel_variance(const KernelSpec& spec, double t) { return kernel_variance_report(spec, t).value; }

double kernel_cell_integral(const KernelSpec& spec, double t, double a, double b) {
  if (!(a >= 0.0 && b > a && t > 0.0)) throw DomainError("cell integral requires 0 <= a < b");
  const bool touches_diag = std::abs(t - b) <= 1e-12 * t;
  if (!touches_diag && b > t) throw DomainError("cell integral requires b <= t");
  const double h = spec.h();
  if (spec.family() == KernelFamily::Volterra && h == 0.5) return b - a;

  const auto in = inner_options(spec.quad());
  auto f = [&](const quad::Point& p) {
    const double gap = touches_diag ? p.from_right : t - p.x;
    return detail::kernel_unit(h, spec.family(), t, p.x, gap, in);
  };
  const double left = (a == 0.0 && spec.family() == KernelFamily::Volterra) ? -std::abs(h - 0.5) : 0.0;
  const double right = touches_diag ? h - 0.5 : 0.0;
  const auto r = quad::integrate_algebraic(f, a, touches_diag ? t : b, left, right, spec.quad(),
                                           "kernel cell quadrature");
  return spec.c_h() * r.value;
}

}  // namespace fbmlab
