#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fbmlab/errors.hpp"

namespace fbmlab::quad {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-9;
  unsigned max_depth = 24;
  bool throw_on_failure = true;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    return *this;
  }
};

/// Abscissa handed to endpoint-aware integrands: the point itself plus its
/// exact distances to both ends of the original interval (no cancellation).
struct Point {
  double x;
  double from_left;
  double from_right;
};

namespace detail {

inline bool accept(const QuadResult& r, const QuadOptions& o) {
  // GK15 reports |K15 - G7|, which overstates the K15 error on smooth integrands.
  const double target = std::max(o.abs_tol, o.rel_tol * std::abs(r.value));
  return std::isfinite(r.value) && r.error <= 10.0 * target;
}

inline void check(const QuadResult& r, const QuadOptions& o, const char* what) {
  if (!r.converged && o.throw_on_failure) throw QuadratureError(what, r.value, r.error);
}

}  // namespace detail

namespace detail {

/// One GK15 panel on [a,b]. Boost reports |K15 - G7| on the reference interval,
/// so the estimate is rescaled by the half-width here.
template <class F>
QuadResult gk15_panel(F& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  return {v, err * 0.5 * (b - a), true};
}

struct Panel {
  double a, b;
  QuadResult r;
  bool operator<(const Panel& o) const { return r.error < o.r.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (15-point) on [a,b]: the panel with the
/// largest error estimate is bisected until the summed estimate meets the
/// tolerance or 2^max_depth panels are in use.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opts = {},
                     const char* what = "quadrature did not converge") {
  QuadResult total;
  if (a == b) return total;
  std::vector<detail::Panel> heap;
  heap.push_back({a, b, detail::gk15_panel(f, a, b)});
  total = heap.front().r;
  const std::size_t max_panels = std::size_t{1} << std::min(opts.max_depth, 16u);
  while (true) {
    total.converged = detail::accept(total, opts) &&
                      total.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value));
    if (total.converged || heap.size() >= max_panels) break;
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    detail::Panel lo{worst.a, mid, detail::gk15_panel(f, worst.a, mid)};
    detail::Panel hi{mid, worst.b, detail::gk15_panel(f, mid, worst.b)};
    heap.push_back(lo);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(hi);
    std::push_heap(heap.begin(), heap.end());
    total.value += lo.r.value + hi.r.value - worst.r.value;
    total.error += lo.r.error + hi.r.error - worst.r.error;
  }
  // Re-sum from the panels so running updates cannot accumulate round-off.
  total.value = 0.0;
  total.error = 0.0;
  for (const auto& p : heap) {
    total.value += p.r.value;
    total.error += p.r.error;
  }
  total.converged = detail::accept(total, opts);
  detail::check(total, opts, what);
  return total;
}

/// Integrates f over [a,b] when f behaves like (x-a)^left_exp near a and
/// (b-x)^right_exp near b (exponents > -1). Each half of the interval is mapped
/// by a power substitution x-a = h y^p, p = 1/(1+left_exp) (resp. for b), which
/// turns the algebraic endpoint factor into a bounded one. f receives a Point.
template <class F>
QuadResult integrate_algebraic(F&& f, double a, double b, double left_exp, double right_exp,
                               const QuadOptions& opts = {},
                               const char* what = "singular quadrature did not converge") {
  QuadResult total;
  if (!(b > a)) return total;
  if (!(left_exp > -1.0 && right_exp > -1.0))
    throw DomainError("endpoint exponent must exceed -1 for integrability");
  const double h = 0.5 * (b - a);
  const double pl = 1.0 / (1.0 + left_exp);
  const double pr = 1.0 / (1.0 + right_exp);

  QuadOptions inner = opts;
  inner.throw_on_failure = false;

  auto left = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double off = h * std::pow(y, pl);
    const double jac = h * pl * std::pow(y, pl - 1.0);
    return f(Point{a + off, off, (b - a) - off}) * jac;
  };
  auto right = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double off = h * std::pow(y, pr);
    const double jac = h * pr * std::pow(y, pr - 1.0);
    return f(Point{b - off, (b - a) - off, off}) * jac;
  };
  total += integrate(left, 0.0, 1.0, inner);
  total += integrate(right, 0.0, 1.0, inner);
  total.converged = detail::accept(total, opts) || total.converged;
  detail::check(total, opts, what);
  return total;
}

/// Fixed-order Gauss-Legendre rule mapped to [0,1].
template <unsigned N>
struct GaussLegendre01 {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre01() {
    using rule = boost::math::quadrature::gauss<double, N>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    // Boost stores the non-negative half of the symmetric rule.
    std::vector<std::pair<double, double>> full;
    for (std::size_t i = 0; i < x.size(); ++i) {
      full.emplace_back(x[i], w[i]);
      if (x[i] != 0.0) full.emplace_back(-x[i], w[i]);
    }
    std::sort(full.begin(), full.end());
    for (unsigned i = 0; i < N; ++i) {
      nodes[i] = 0.5 * (full[i].first + 1.0);
      weights[i] = 0.5 * full[i].second;
    }
  }
};

}  // namespace fbmlab::quad
