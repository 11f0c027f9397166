#include "fbmlab/drift.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace fbmlab {

DriftModel::DriftModel(Kind kind, std::size_t dim, double alpha, double lip)
    : kind_(kind), dim_(dim), alpha_(alpha), lip_(lip) {
  if (dim == 0) throw DomainError("drift dimension must be >= 1");
  if (!(alpha > 0.0)) throw DomainError("drift must be dissipative (alpha > 0)");
  if (!(lip >= alpha)) throw DomainError("Lipschitz constant must be >= alpha");
}

DriftModel DriftModel::linear(Eigen::MatrixXd a, Eigen::VectorXd c) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("linear drift needs a square matrix");
  if (c.size() != a.rows()) throw DomainError("linear drift offset has wrong size");
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const double alpha = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff();
  const double lip = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
  if (!(alpha > 0.0))
    throw DomainError("linear drift: symmetric part of A must be positive definite (alpha = " +
                      std::to_string(alpha) + ")");
  DriftModel m(Kind::Linear, static_cast<std::size_t>(a.rows()), alpha, std::max(lip, alpha));
  m.a_ = std::move(a);
  m.c_ = std::move(c);
  return m;
}

DriftModel DriftModel::perturbed_linear(double alpha0, double eps, std::size_t dim) {
  if (!(alpha0 > 0.0) || !(eps >= 0.0) || !(eps < alpha0))
    throw DomainError("perturbed linear drift requires 0 <= eps < alpha0");
  DriftModel m(Kind::PerturbedLinear, dim, alpha0 - eps, alpha0 + eps);
  m.alpha0_ = alpha0;
  m.eps_ = eps;
  return m;
}

DriftModel DriftModel::custom(Function f, std::size_t dim, double alpha, double lip) {
  if (!f) throw DomainError("custom drift needs a callable");
  DriftModel m(Kind::Custom, dim, alpha, lip);
  m.fn_ = std::move(f);
  return m;
}

void DriftModel::eval(std::span<const double> x, std::span<double> out) const {
  switch (kind_) {
    case Kind::Linear:
      for (std::size_t i = 0; i < dim_; ++i) {
        double acc = c_(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < dim_; ++j)
          acc -= a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
        out[i] = acc;
      }
      return;
    case Kind::PerturbedLinear:
      for (std::size_t i = 0; i < dim_; ++i) out[i] = -alpha0_ * x[i] + eps_ * std::sin(x[i]);
      return;
    case Kind::Custom:
      fn_(x, out);
      return;
  }
}

ValidationReport validate_drift(const DriftModel& model, std::size_t probe_count, double radius,
                                RngStream& rng) {
  if (probe_count == 0) throw DomainError("validate_drift needs probe_count >= 1");
  if (!(radius > 0.0)) throw DomainError("validate_drift needs radius > 0");
  const std::size_t d = model.dim();
  auto draw_in_ball = [&](std::vector<double>& x) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& v : x) {
        v = rng.normal();
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    const double s = r / std::sqrt(norm2);
    for (double& v : x) v *= s;
  };

  ValidationReport rep;
  rep.max_one_sided = -INFINITY;
  std::vector<double> x(d), y(d), bx(d), by(d);
  while (rep.probes < probe_count) {
    draw_in_ball(x);
    draw_in_ball(y);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) dist2 += (x[i] - y[i]) * (x[i] - y[i]);
    if (dist2 == 0.0) continue;
    model.eval(x, bx);
    model.eval(y, by);
    double inner = 0.0, diff2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      inner += (bx[i] - by[i]) * (x[i] - y[i]);
      diff2 += (bx[i] - by[i]) * (bx[i] - by[i]);
    }
    rep.max_one_sided = std::max(rep.max_one_sided, inner / dist2);
    rep.max_lip_ratio = std::max(rep.max_lip_ratio, std::sqrt(diff2 / dist2));
    ++rep.probes;
  }
  rep.one_sided_ok = rep.max_one_sided <= -model.alpha() * (1.0 - 1e-9);
  rep.lipschitz_ok = rep.max_lip_ratio <= model.lip() * (1.0 + 1e-9);
  return rep;
}

}  // namespace fbmlab
