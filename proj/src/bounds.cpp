#include "fbmlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbmlab/errors.hpp"
#include "fbmlab/quadrature.hpp"

namespace fbmlab::bounds {

namespace {

double sqrt_psi(double h, double u, double k) {
  if (h <= 0.5) return std::pow(u, h - 1.5);
  return std::sqrt(std::pow(k, 1.0 - 2.0 * h) * std::pow(u, 4.0 * h - 4.0) + std::pow(u, 2.0 * h - 3.0));
}

}  // namespace

double psi_big(const HurstParameter& hp, double u, std::size_t k, double c_prime) {
  if (!(u > 0.0)) throw DomainError("Psi_H requires u > 0");
  if (k == 0) throw DomainError("Psi_H requires k >= 1");
  const double h = hp.value();
  const double base = std::pow(u, 2.0 * h - 3.0);
  if (h <= 0.5) return c_prime * base;
  return c_prime * (std::pow(static_cast<double>(k), 1.0 - 2.0 * h) * std::pow(u, 4.0 * h - 4.0) + base);
}

double psi_discrete(const HurstParameter& hp, std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw DomainError("psi_discrete requires 1 <= k <= n");
  const double h = hp.value();
  const std::size_t m = n - k + 1;
  double s = 0.0;
  // Smallest terms first.
  for (std::size_t u = m; u >= 1; --u) s += sqrt_psi(h, static_cast<double>(u), static_cast<double>(k));
  return s;
}

double psi_continuous(const HurstParameter& hp, double t, std::size_t k) {
  if (!(t >= 1.0)) throw DomainError("psi_continuous requires T >= 1");
  if (k < 1 || static_cast<double>(k) > std::ceil(t)) throw DomainError("psi_continuous requires 1 <= k <= ceil(T)");
  const double h = hp.value();
  const double m = t - static_cast<double>(k) + 1.0;
  const double kd = static_cast<double>(k);
  if (m <= 1.0) return m * sqrt_psi(h, 1.0, kd);
  if (h < 0.5) return 1.0 + (std::pow(m, h - 0.5) - 1.0) / (h - 0.5);
  if (h == 0.5) return 1.0 + std::log(m);
  quad::QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 0.0;
  double acc = sqrt_psi(h, 1.0, kd);
  double lo = 1.0;
  while (lo < m) {
    const double hi = std::min(m, 2.0 * lo);
    acc += quad::integrate([&](double u) { return sqrt_psi(h, u, kd); }, lo, hi, opts, "psi' quadrature").value;
    lo = hi;
  }
  return acc;
}

BoundProfile sum_psi_squared(const HurstParameter& hp, Horizon mode, double n_or_t, par::Exec exec) {
  BoundProfile p{hp, mode, n_or_t, {}, {}, 0.0, hp.growth_exponent()};
  std::size_t kmax = 0;
  if (mode == Horizon::Discrete) {
    if (!(n_or_t >= 2.0) || n_or_t != std::floor(n_or_t)) throw DomainError("discrete profile needs integer n >= 2");
    kmax = static_cast<std::size_t>(n_or_t);
  } else {
    if (!(n_or_t >= 1.0)) throw DomainError("continuous profile needs T >= 1");
    kmax = static_cast<std::size_t>(std::ceil(n_or_t));
  }
  p.psi.assign(kmax, 0.0);
  const double h = hp.value();
  if (mode == Horizon::Discrete && h <= 0.5) {
    // psi_{n,k} depends on k only through the number of terms: prefix sums.
    std::vector<double> prefix(kmax + 1, 0.0);
    for (std::size_t u = 1; u <= kmax; ++u) prefix[u] = prefix[u - 1] + sqrt_psi(h, static_cast<double>(u), 1.0);
    for (std::size_t k = 1; k <= kmax; ++k) p.psi[k - 1] = prefix[kmax - k + 1];
  } else {
    par::for_each(exec, kmax, [&](std::size_t i) {
      const std::size_t k = i + 1;
      p.psi[i] = mode == Horizon::Discrete ? psi_discrete(hp, kmax, k) : psi_continuous(hp, n_or_t, k);
    });
  }
  p.psi_sq_cumsum.resize(kmax);
  double acc = 0.0;
  for (std::size_t i = 0; i < kmax; ++i) {
    acc += p.psi[i] * p.psi[i];
    p.psi_sq_cumsum[i] = acc;
  }
  p.sum_psi_sq = acc;
  return p;
}

double moment_to_expmoment_bound(double c, double zeta, double lambda) {
  if (!(c > 0.0) || !(zeta > 0.0) || !(lambda >= 0.0))
    throw DomainError("moment_to_expmoment_bound requires c, zeta > 0 and lambda >= 0");
  return std::exp(2.0 * std::max(1.0, c) * zeta * lambda * lambda);
}

namespace {
void check_envelope_args(double n_or_t, double lip, double c_const, double r, Horizon mode) {
  if (!(r >= 0.0) || !(lip > 0.0) || !(c_const > 0.0)) throw DomainError("envelope requires r >= 0, lip > 0, C > 0");
  if (mode == Horizon::Continuous ? !(n_or_t >= 1.0) : !(n_or_t >= 1.0))
    throw DomainError("envelope requires a horizon >= 1");
}
}  // namespace

double concentration_envelope(const HurstParameter& h, double n_or_t, double lip, double c_const,
                              double r, Horizon mode) {
  check_envelope_args(n_or_t, lip, c_const, r, mode);
  return std::exp(-r * r / (4.0 * c_const * lip * lip * std::pow(n_or_t, h.growth_exponent())));
}

double occupation_envelope(const HurstParameter& h, double n_or_t, double lip, double c_const,
                           double r, Horizon mode) {
  check_envelope_args(n_or_t, lip, c_const, r, mode);
  return std::exp(-r * r * std::pow(n_or_t, 2.0 - h.growth_exponent()) / (4.0 * c_const * lip * lip));
}

LemmaIntegralReport check_lemma_integral(double alpha, double beta, const std::vector<double>& u_grid) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("lemma integral requires alpha, beta > 0");
  LemmaIntegralReport rep;
  quad::QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 0.0;
  for (double u : u_grid) {
    if (!(u >= 2.0)) throw DomainError("lemma integral grid values must be >= 2");
    auto f = [&](double v) { return std::exp(-alpha * (u - v)) * std::pow(v - 1.0, -beta); };
    // Pieces of doubling length measured back from u, where the exponential weight lives.
    double value = 0.0;
    double hi = u;
    double len = 1.0;
    while (hi > 2.0) {
      const double lo = std::max(2.0, hi - len);
      value += quad::integrate(f, lo, hi, opts, "lemma integral quadrature").value;
      hi = lo;
      len *= 2.0;
    }
    rep.u.push_back(u);
    rep.integral.push_back(value);
    rep.ratio.push_back(value * std::pow(u - 1.0, beta));
  }
  rep.finite = std::all_of(rep.ratio.begin(), rep.ratio.end(), [](double r) { return std::isfinite(r); });
  rep.sup_ratio = rep.ratio.empty() ? 0.0 : *std::max_element(rep.ratio.begin(), rep.ratio.end());
  rep.last_octave_change = std::numeric_limits<double>::quiet_NaN();
  if (!rep.u.empty()) {
    const double last = rep.u.back();
    for (std::size_t i = rep.u.size(); i-- > 0;) {
      if (rep.u[i] <= 0.5 * last && rep.ratio[i] > 0.0) {
        rep.last_octave_change = std::abs(rep.ratio.back() - rep.ratio[i]) / rep.ratio[i];
        break;
      }
    }
  }
  return rep;
}

}  // namespace fbmlab::bounds
