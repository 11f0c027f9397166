#include "fbmlab/gaussian_diagnostics.hpp"

#include <algorithm>
#include <utility>
#include <cmath>
#include <numbers>

#include "fbmlab/rng.hpp"

namespace fbmlab::diag {

void GProcessSpec::validate() const {
  if (kernel.family() != KernelFamily::Volterra) throw DomainError("G process uses the Volterra kernel");
  if (k < 1) throw DomainError("block index k must be >= 1");
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    if (!(v_grid[i] >= 0.0 && v_grid[i] <= 2.0)) throw DomainError("v grid must lie in [0,2]");
    if (i > 0 && !(v_grid[i] > v_grid[i - 1])) throw DomainError("v grid must be increasing");
  }
}

namespace {

quad::QuadOptions inner_opts(const KernelSpec& spec) {
  quad::QuadOptions o = spec.quad();
  o.rel_tol = std::min(o.rel_tol, 1e-11);
  o.abs_tol = 0.0;
  return o;
}

// c_H K(t, s) with the gap t - s supplied exactly.
double kernel_gap(const KernelSpec& spec, double t, double s, double gap, const quad::QuadOptions& in) {
  return spec.c_h() * detail::kernel_unit(spec.h(), KernelFamily::Volterra, t, s, gap, in);
}

}  // namespace

quad::QuadResult g_increment_second_moment_report(const GProcessSpec& spec, double v, double vp) {
  if (spec.kernel.family() != KernelFamily::Volterra) throw DomainError("G process uses the Volterra kernel");
  if (!(std::min(v, vp) >= 0.0 && std::max(v, vp) <= 2.0)) throw DomainError("second moment requires v, v' in [0, 2]");
  if (v == vp) return {};
  if (vp > v) std::swap(v, vp);
  const double h = spec.kernel.h();
  const double shift = static_cast<double>(spec.k) - 1.0;
  const double a1 = std::min(1.0, vp);
  const double a2 = std::min(1.0, v);
  const auto in = inner_opts(spec.kernel);
  const double sing_left = spec.k == 1 ? -std::abs(2.0 * h - 1.0) : 0.0;
  const double sing_diag = h < 0.5 ? 2.0 * h - 1.0 : h - 0.5;

  quad::QuadOptions opts = spec.kernel.quad();
  opts.abs_tol = std::min(opts.abs_tol, 1e-12);
  quad::QuadResult total;
  if (a1 > 0.0) {
    auto i1 = [&](const quad::Point& p) {
      const double s = p.x + shift;
      const double kv = kernel_gap(spec.kernel, v + shift, s, (v - a1) + p.from_right, in);
      const double kvp = kernel_gap(spec.kernel, vp + shift, s, (vp - a1) + p.from_right, in);
      return (kv - kvp) * (kv - kvp);
    };
    total += quad::integrate_algebraic(i1, 0.0, a1, sing_left, vp <= 1.0 ? sing_diag : 0.0, opts,
                                       "G increment quadrature (I1)");
  }
  if (a2 > a1) {
    auto i2 = [&](const quad::Point& p) {
      const double kv = kernel_gap(spec.kernel, v + shift, p.x + shift, (v - a2) + p.from_right, in);
      return kv * kv;
    };
    total += quad::integrate_algebraic(i2, a1, a2, a1 == 0.0 ? sing_left : 0.0,
                                       v <= 1.0 ? 2.0 * h - 1.0 : 0.0, opts, "G increment quadrature (I2)");
  }
  return total;
}

double g_increment_second_moment(const GProcessSpec& spec, double v, double vp) {
  return g_increment_second_moment_report(spec, v, vp).value;
}

double holder_alpha(double h) { return h < 0.5 ? h : (h > 0.5 ? 0.5 * h : 0.5); }

HolderReport check_g_holder_bound(const KernelSpec& kernel, const std::vector<std::size_t>& k_values,
                                  const std::vector<double>& grid_in, par::Exec exec) {
  std::vector<double> grid = grid_in;
  if (grid.empty())
    for (int i = 0; i <= 16; ++i) grid.push_back(i / 8.0);

  HolderReport rep;
  rep.h = kernel.h();
  rep.alpha = holder_alpha(rep.h);
  rep.alpha_prime = holder_alpha_prime(rep.h);
  rep.k_values = k_values;

  struct Job {
    std::size_t k;
    double v, vp;
  };
  std::vector<Job> jobs;
  for (std::size_t k : k_values)
    for (std::size_t j = 0; j < grid.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) jobs.push_back({k, grid[j], grid[i]});

  rep.rows.resize(jobs.size());
  par::for_each(exec, jobs.size(), [&](std::size_t n) {
    const Job& job = jobs[n];
    GProcessSpec spec{kernel, job.k, {}};
    const double m2 = g_increment_second_moment(spec, job.v, job.vp);
    rep.rows[n] = {job.k, job.v, job.vp, m2, m2 / std::pow(job.v - job.vp, 2.0 * rep.alpha)};
  });

  rep.sup_ratio.assign(k_values.size(), 0.0);
  for (const auto& row : rep.rows) {
    const auto idx = static_cast<std::size_t>(
        std::find(k_values.begin(), k_values.end(), row.k) - k_values.begin());
    rep.sup_ratio[idx] = std::max(rep.sup_ratio[idx], row.ratio);
  }
  rep.finite = std::all_of(rep.sup_ratio.begin(), rep.sup_ratio.end(), [](double r) { return std::isfinite(r); });
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 4) continue;
    lo = std::min(lo, rep.sup_ratio[i]);
    hi = std::max(hi, rep.sup_ratio[i]);
  }
  rep.variation_beyond_4 = hi >= lo ? (hi - lo) / lo : 0.0;
  rep.pass = rep.finite && rep.variation_beyond_4 < 0.2;
  return rep;
}

double gtilde_increment_second_moment(double h, double v, double vp) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
  if (!(vp >= 0.0 && vp <= v && v <= 0.5)) throw DomainError("G-tilde moment requires 0 <= v' <= v <= 1/2");
  if (v == vp) return 0.0;
  const double a = h - 1.5;
  auto f = [&](const quad::Point& p) {
    const double s = p.x;
    // (1 - v s)^a - (1 - v' s)^a without cancellation for small v.
    const double d = std::expm1(a * std::log1p(-v * s)) - std::expm1(a * std::log1p(-vp * s));
    return std::pow(s, 1.0 - 2.0 * h) * d * d;
  };
  quad::QuadOptions opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 0.0;
  return quad::integrate_algebraic(f, 0.0, 1.0, 1.0 - 2.0 * h, 0.0, opts, "G-tilde quadrature").value;
}

Eigen::MatrixXd g_process_weights(const GProcessSpec& spec, std::size_t cells) {
  spec.validate();
  if (cells == 0) throw DomainError("G process needs at least one cell");
  const double width = 1.0 / static_cast<double>(cells);
  const double shift = static_cast<double>(spec.k) - 1.0;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.v_grid.size()),
                                            static_cast<Eigen::Index>(cells));
  for (std::size_t j = 0; j < spec.v_grid.size(); ++j) {
    const double v = spec.v_grid[j];
    const double top = std::min(1.0, v);
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = static_cast<double>(i) * width;
      if (a >= top) break;
      const double b = std::min(top, static_cast<double>(i + 1) * width);
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          kernel_cell_integral(spec.kernel, v + shift, a + shift, b + shift) / width;
    }
  }
  return w;
}

Eigen::MatrixXd sample_g_process(const GProcessSpec& spec, std::size_t cells, std::uint64_t seed,
                                 std::uint64_t first, std::size_t count, par::Exec exec) {
  const Eigen::MatrixXd w = g_process_weights(spec, cells);
  const double sd = std::sqrt(1.0 / static_cast<double>(cells));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), w.rows());
  par::for_each_chunk(exec, count, 64, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd z(static_cast<Eigen::Index>(cells), static_cast<Eigen::Index>(end - begin));
    for (std::size_t r = begin; r < end; ++r) {
      RngStream rng(seed, first + r);
      for (std::size_t i = 0; i < cells; ++i)
        z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r - begin)) = sd * rng.normal();
    }
    const Eigen::MatrixXd g = w * z;
    out.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) = g.transpose();
  });
  return out;
}

SupSamples sample_bm_suprema(std::size_t dim, std::size_t n_paths, std::size_t n_steps,
                             std::uint64_t seed, std::uint64_t first, par::Exec exec) {
  if (dim == 0 || n_steps < 2) throw DomainError("sup sampler needs dim >= 1 and n_steps >= 2");
  SupSamples s;
  s.seed = seed;
  s.first = first;
  s.sup_norm.resize(n_paths);
  s.sup_norm_coarse.resize(n_paths);
  s.sup_first.resize(n_paths);
  const double sd = std::sqrt(1.0 / static_cast<double>(n_steps));
  par::for_each_chunk(exec, n_paths, 256, [&](std::size_t begin, std::size_t end) {
    std::vector<double> inc(dim * n_steps);
    std::vector<double> w(dim);
    for (std::size_t r = begin; r < end; ++r) {
      RngStream rng(seed, first + r);
      for (double& x : inc) x = sd * rng.normal();  // coordinate-major, as sample_bm
      std::fill(w.begin(), w.end(), 0.0);
      double sup = 0.0, sup_coarse = 0.0, sup1 = 0.0;
      for (std::size_t k = 0; k < n_steps; ++k) {
        double norm2 = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
          w[c] += inc[c * n_steps + k];
          norm2 += w[c] * w[c];
        }
        const double norm = std::sqrt(norm2);
        sup = std::max(sup, norm);
        if ((k + 1) % 2 == 0) sup_coarse = std::max(sup_coarse, norm);
        sup1 = std::max(sup1, w[0]);
      }
      s.sup_norm[r] = sup;
      s.sup_norm_coarse[r] = sup_coarse;
      s.sup_first[r] = sup1;
    }
  });
  return s;
}

namespace {
McEstimate exceedance(const std::vector<double>& v, double x, std::uint64_t seed, std::uint64_t first) {
  std::vector<double> ind(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) ind[i] = v[i] > x ? 1.0 : 0.0;
  return mc_mean(ind, seed, first);
}
}  // namespace

SupTail sup_bm_tail(const SupSamples& s, double x, std::size_t dim) {
  if (!(x >= 0.0)) throw DomainError("sup tail requires x >= 0");
  SupTail t;
  t.x = x;
  t.dim = dim;
  t.two_sided = exceedance(s.sup_norm, x, s.seed, s.first);
  t.two_sided_coarse = exceedance(s.sup_norm_coarse, x, s.seed, s.first);
  t.one_sided = exceedance(s.sup_first, x, s.seed, s.first);
  t.reflection_bound = 4.0 * static_cast<double>(dim) * normal_sf(x);
  t.sub_gaussian_bound = sub_gaussian_constant(dim) * std::exp(-x * x / 4.0);
  t.discretization_allowance = std::abs(t.two_sided.value - t.two_sided_coarse.value);
  t.discretization_settled = t.discretization_allowance < 0.5 * t.two_sided.std_error;
  return t;
}

double bm_abs_sup_below(double x) {
  if (!(x > 0.0)) return 0.0;
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double m = 2.0 * k + 1.0;
    const double term = std::exp(-m * m * pi * pi / (8.0 * x * x)) / m;
    s += (k % 2 == 0 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(4.0 / pi * s, 0.0, 1.0);
}

double sup_moment_comparator(int p, double eta, double eta_prime) {
  const double pd = static_cast<double>(p);
  return 0.5 * eta_prime * std::pow(1.0 / eta, pd / 2.0) * pd * std::tgamma(pd / 2.0);
}

SupMoment sup_bm_moment(const SupSamples& s, int p, std::size_t dim, double eta, double eta_prime) {
  if (p < 2) throw DomainError("sup moment requires p >= 2");
  SupMoment m;
  m.p = p;
  m.dim = dim;
  m.eta = eta;
  m.eta_prime = eta_prime > 0.0 ? eta_prime : sub_gaussian_constant(dim);
  std::vector<double> v(s.sup_norm.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(s.sup_norm[i], p);
  m.estimate = mc_mean(v, s.seed, s.first);
  m.comparator = sup_moment_comparator(p, m.eta, m.eta_prime);
  return m;
}

}  // namespace fbmlab::diag
