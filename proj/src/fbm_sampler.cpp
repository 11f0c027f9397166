#include "fbmlab/fbm_sampler.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace fbmlab {

namespace {

// Draws n_steps normals per coordinate into columns of z.
Eigen::MatrixXd draw_normals(std::size_t n, std::size_t dim, RngStream& rng) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t i = 0; i < n; ++i)
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rng.normal();
  return z;
}

SamplePath cumulate(const TimeGrid& grid, const Eigen::MatrixXd& inc) {
  SamplePath p(grid, static_cast<std::size_t>(inc.cols()));
  for (Eigen::Index c = 0; c < inc.cols(); ++c) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < inc.rows(); ++i) {
      acc += inc(i, c);
      p(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(c)) = acc;
    }
  }
  return p;
}

double fgn_autocov(double h, double k) {
  const double e = 2.0 * h;
  return 0.5 * (std::pow(std::abs(k + 1.0), e) - 2.0 * std::pow(std::abs(k), e) +
                std::pow(std::abs(k - 1.0), e));
}

}  // namespace

SamplePath sample_bm(const TimeGrid& grid, std::size_t dim, RngStream& rng) {
  Eigen::MatrixXd z = draw_normals(grid.n_steps(), dim, rng);
  z *= std::sqrt(grid.dt());
  return cumulate(grid, z);
}

std::shared_ptr<const FgnFactor> fgn_cholesky_factor(double h, std::size_t n) {
  if (n == 0 || n > kCholeskyMaxSteps)
    throw DomainError("Cholesky sampler supports 1 <= n_steps <= " + std::to_string(kCholeskyMaxSteps));
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, std::shared_ptr<const FgnFactor>> cache;
  const auto key = std::make_pair(h, n);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto nn = static_cast<Eigen::Index>(n);
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocov(h, static_cast<double>(k));
  Eigen::MatrixXd cov(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = 0; j < nn; ++j) cov(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];

  auto out = std::make_shared<FgnFactor>();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov.diagonal().array() += 1e-12 * cov.diagonal().maxCoeff();
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw FactorizationError("fGn covariance not positive definite after jitter (H=" +
                               std::to_string(h) + ", n=" + std::to_string(n) + ")");
    out->jittered = true;
  }
  out->lower = llt.matrixL();
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(out)).first->second;
}

SamplePath sample_fbm_cholesky(const KernelSpec& spec, const TimeGrid& grid, std::size_t dim,
                               RngStream& rng) {
  if (spec.family() != KernelFamily::Volterra)
    throw DomainError("Cholesky sampler targets the standard fBm covariance (Volterra family)");
  const auto factor = fgn_cholesky_factor(spec.h(), grid.n_steps());
  const Eigen::MatrixXd z = draw_normals(grid.n_steps(), dim, rng);
  Eigen::MatrixXd inc = factor->lower.triangularView<Eigen::Lower>() * z;
  inc *= std::pow(grid.dt(), spec.h());
  return cumulate(grid, inc);
}

Eigen::MatrixXd build_volterra_unit_weights(const KernelSpec& spec, std::size_t n, par::Exec exec) {
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nn, nn);
  // Longest rows first keeps dynamic scheduling balanced.
  par::for_each(exec, n, [&](std::size_t r) {
    const std::size_t j = n - r;
    const double t = static_cast<double>(j);
    for (std::size_t i = 0; i < j; ++i)
      w(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(i)) =
          kernel_cell_integral(spec, t, static_cast<double>(i), static_cast<double>(i + 1));
  });
  return w;
}

std::shared_ptr<const Eigen::MatrixXd> volterra_unit_weights(const KernelSpec& spec, std::size_t n) {
  static std::mutex mu;
  using Key = std::tuple<double, int, std::size_t, double, double>;
  static std::map<Key, std::shared_ptr<const Eigen::MatrixXd>> cache;
  const Key key{spec.h(), static_cast<int>(spec.family()), n, spec.quad().rel_tol, spec.quad().abs_tol};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto w = std::make_shared<const Eigen::MatrixXd>(build_volterra_unit_weights(spec, n));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(w)).first->second;
}

CoupledPaths sample_fbm_volterra(const KernelSpec& spec, const TimeGrid& grid, std::size_t dim,
                                 RngStream& rng) {
  const auto weights = volterra_unit_weights(spec, grid.n_steps());
  Eigen::MatrixXd dw = draw_normals(grid.n_steps(), dim, rng);
  dw *= std::sqrt(grid.dt());
  SamplePath w = cumulate(grid, dw);
  SamplePath b(grid, dim);
  const double scale = std::pow(grid.dt(), spec.h() - 0.5);
  const Eigen::MatrixXd bj = weights->triangularView<Eigen::Lower>() * dw;
  for (Eigen::Index c = 0; c < bj.cols(); ++c)
    for (Eigen::Index j = 0; j < bj.rows(); ++j)
      b(static_cast<std::size_t>(j) + 1, static_cast<std::size_t>(c)) = scale * bj(j, c);
  return {std::move(w), std::move(b)};
}

SamplePath sample_fbm(NoiseMethod method, const KernelSpec& spec, const TimeGrid& grid,
                      std::size_t dim, RngStream& rng) {
  if (method == NoiseMethod::Cholesky) return sample_fbm_cholesky(spec, grid, dim, rng);
  return sample_fbm_volterra(spec, grid, dim, rng).b;
}

FbmBatchSampler::FbmBatchSampler(NoiseMethod method, const KernelSpec& spec, const TimeGrid& grid,
                                 std::size_t dim)
    : method_(method), grid_(grid), dim_(dim), scale_(std::pow(grid.dt(), spec.h())) {
  if (dim == 0) throw DomainError("sample dimension must be >= 1");
  if (method == NoiseMethod::Cholesky) {
    if (spec.family() != KernelFamily::Volterra)
      throw DomainError("Cholesky sampler targets the standard fBm covariance (Volterra family)");
    fgn_ = fgn_cholesky_factor(spec.h(), grid.n_steps());
  } else {
    volterra_ = volterra_unit_weights(spec, grid.n_steps());
  }
}

std::vector<SamplePath> FbmBatchSampler::sample(std::uint64_t seed, std::uint64_t first,
                                                std::size_t count) const {
  const std::size_t n = grid_.n_steps();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count * dim_));
  for (std::size_t r = 0; r < count; ++r) {
    RngStream rng(seed, first + r);
    for (std::size_t c = 0; c < dim_; ++c)
      for (std::size_t i = 0; i < n; ++i)
        z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r * dim_ + c)) = rng.normal();
  }
  const Eigen::MatrixXd& m = method_ == NoiseMethod::Cholesky ? fgn_->lower : *volterra_;
  Eigen::MatrixXd prod = m.triangularView<Eigen::Lower>() * z;
  prod *= scale_;

  std::vector<SamplePath> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    SamplePath p(grid_, dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
      const auto col = static_cast<Eigen::Index>(r * dim_ + c);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = prod(static_cast<Eigen::Index>(i), col);
        acc = method_ == NoiseMethod::Cholesky ? acc + v : v;
        p(i + 1, c) = acc;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace fbmlab
