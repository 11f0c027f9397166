#include "fbmlab/sde.hpp"

#include <cmath>
#include <vector>

namespace fbmlab {

double SdeSpec::sigma_norm() const {
  if (sigma.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(sigma).singularValues()(0);
}

void SdeSpec::validate() const {
  const auto d = static_cast<Eigen::Index>(dim());
  if (sigma.rows() != d || sigma.cols() != d) throw DomainError("sigma must be d x d");
  if (x0.size() != d) throw DomainError("x0 must have dimension d");
  if (!sigma.allFinite() || !x0.allFinite()) throw DomainError("sigma and x0 must be finite");
}

SamplePath integrate(const SdeSpec& spec, const SamplePath& fbm) {
  spec.validate();
  const std::size_t d = spec.dim();
  if (fbm.dim() != d) throw DomainError("fBm path dimension does not match the SDE");
  const auto& grid = fbm.grid();
  const double dt = grid.dt();
  SamplePath y(grid, d);
  for (std::size_t c = 0; c < d; ++c) y(0, c) = spec.x0(static_cast<Eigen::Index>(c));

  std::vector<double> b(d);
  for (std::size_t j = 0; j < grid.n_steps(); ++j) {
    const auto yj = y.row(j);
    spec.drift.eval(yj, b);
    auto next = y.row(j + 1);
    for (std::size_t r = 0; r < d; ++r) {
      double noise = 0.0;
      for (std::size_t c = 0; c < d; ++c)
        noise += spec.sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *
                 (fbm(j + 1, c) - fbm(j, c));
      next[r] = yj[r] + b[r] * dt + noise;
      if (!std::isfinite(next[r])) throw IntegrationError("non-finite SDE state", j + 1);
    }
  }
  return y;
}

}  // namespace fbmlab
