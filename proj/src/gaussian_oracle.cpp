#include "fbmlab/gaussian_oracle.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "fbmlab/quadrature.hpp"

namespace fbmlab::oracle {

LinearGaussianModel model_from(const SdeSpec& spec) {
  if (spec.drift.kind() != DriftModel::Kind::Linear)
    throw DomainError("Gaussian oracle requires a linear drift");
  return {spec.drift.matrix(), spec.sigma, spec.kernel.h()};
}

namespace {

// The noise part of the statistic (before normalization) for driving
// coordinate m is, after integrating by parts against B^m,
//   L = sum_k alpha_k B_k + sum_i int_0^1 c_i . phi(x) B_{i+x} dx
// on the unit-cell scale, where phi(x) = exp(A delta x) sigma e_m. Its variance
// follows from R(u,v) = (u^{2H} + v^{2H} - |u-v|^{2H}) / 2.
struct Functional {
  std::vector<double> alpha;             // point weights at k = 0..cells
  std::vector<Eigen::RowVectorXd> coef;  // per cell
};

class CellBasis {
 public:
  CellBasis(const Eigen::MatrixXd& a, double delta, const Eigen::VectorXd& s, double h)
      : a_delta_(a * delta), s_(s), h2_(2.0 * h) {
    for (unsigned i = 0; i < 16; ++i) at_nodes_.push_back(phi(gl_.nodes[i]));
  }

  Eigen::VectorXd phi(double x) const { return (a_delta_ * x).exp() * s_; }
  std::size_t dim() const { return static_cast<std::size_t>(s_.size()); }

  // int_0^1 phi(x) |l - x|^{2H} dx
  Eigen::VectorXd n_vec(long l) const {
    if (l <= -1 || l >= 2) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(s_.size());
      for (unsigned i = 0; i < 16; ++i)
        acc += gl_.weights[i] * std::pow(std::abs(static_cast<double>(l) - gl_.nodes[i]), h2_) * at_nodes_[i];
      return acc;
    }
    Eigen::VectorXd out(s_.size());
    for (Eigen::Index p = 0; p < s_.size(); ++p) {
      auto f = [&](const quad::Point& pt) {
        const double dist = l == 0 ? pt.from_left : pt.from_right;
        return phi(pt.x)(p) * std::pow(dist, h2_);
      };
      out(p) = quad::integrate_algebraic(f, 0.0, 1.0, l == 0 ? h2_ : 0.0, l == 1 ? h2_ : 0.0, opts_).value;
    }
    return out;
  }

  // int_0^1 phi(x) (i + x)^{2H} dx
  Eigen::VectorXd q2_vec(std::size_t i) const {
    if (i == 0) return n_vec(0);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(s_.size());
    for (unsigned j = 0; j < 16; ++j)
      acc += gl_.weights[j] * std::pow(static_cast<double>(i) + gl_.nodes[j], h2_) * at_nodes_[j];
    return acc;
  }

  Eigen::VectorXd q0_vec() const {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(s_.size());
    for (unsigned j = 0; j < 16; ++j) acc += gl_.weights[j] * at_nodes_[j];
    return acc;
  }

  // int_0^1 int_0^1 phi(x) phi(y)^T |l + y - x|^{2H} dx dy
  Eigen::MatrixXd m_mat(long l) const {
    const auto d = s_.size();
    if (std::abs(l) >= 3) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
      for (unsigned i = 0; i < 16; ++i)
        for (unsigned j = 0; j < 16; ++j)
          acc += gl_.weights[i] * gl_.weights[j] *
                 std::pow(std::abs(static_cast<double>(l) + gl_.nodes[j] - gl_.nodes[i]), h2_) *
                 at_nodes_[i] * at_nodes_[j].transpose();
      return acc;
    }
    // tau = y - x: int_{-1}^{1} |l + tau|^{2H} C(tau) dtau with
    // C(tau) = int phi(x) phi(x + tau)^T dx over the overlap of length 1 - |tau|.
    auto overlap = [&](double tau) {
      const double x0 = std::max(0.0, -tau);
      const double len = 1.0 - std::abs(tau);
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
      for (unsigned i = 0; i < 16; ++i) {
        const double x = x0 + len * gl_.nodes[i];
        c += gl_.weights[i] * len * phi(x) * phi(x + tau).transpose();
      }
      return c;
    };
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) {
        // Piece [-1,0]: |l + tau| vanishes at tau = -l when l in {0, 1}.
        auto neg = [&](const quad::Point& pt) {
          const double tau = pt.x;
          const double dist = l == 1 ? pt.from_left : (l == 0 ? pt.from_right : std::abs(l + tau));
          return std::pow(dist, h2_) * overlap(tau)(p, q);
        };
        auto pos = [&](const quad::Point& pt) {
          const double tau = pt.x;
          const double dist = l == 0 ? pt.from_left : (l == -1 ? pt.from_right : std::abs(l + tau));
          return std::pow(dist, h2_) * overlap(tau)(p, q);
        };
        out(p, q) = quad::integrate_algebraic(neg, -1.0, 0.0, l == 1 ? h2_ : 0.0, l == 0 ? h2_ : 0.0, opts_).value +
                    quad::integrate_algebraic(pos, 0.0, 1.0, l == 0 ? h2_ : 0.0, l == -1 ? h2_ : 0.0, opts_).value;
      }
    return out;
  }

 private:
  Eigen::MatrixXd a_delta_;
  Eigen::VectorXd s_;
  double h2_;
  quad::GaussLegendre01<16> gl_;
  std::vector<Eigen::VectorXd> at_nodes_;
  quad::QuadOptions opts_{1e-12, 1e-14, 24, true};
};

double functional_variance(const Functional& fn, const CellBasis& basis, double h, par::Exec exec) {
  const std::size_t cells = fn.coef.size();
  const double h2 = 2.0 * h;
  const auto d = static_cast<Eigen::Index>(basis.dim());

  // Total mass m0 and first "moment" m2 = int u^{2H} dmu of the signed measure.
  const Eigen::VectorXd q0 = basis.q0_vec();
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < fn.alpha.size(); ++k) {
    m0 += fn.alpha[k];
    m2 += fn.alpha[k] * std::pow(static_cast<double>(k), h2);
  }
  for (std::size_t i = 0; i < cells; ++i) {
    m0 += fn.coef[i].dot(q0);
    m2 += fn.coef[i].dot(basis.q2_vec(i));
  }

  // Lag tables.
  const long lmax = static_cast<long>(cells);
  std::vector<Eigen::MatrixXd> mtab(static_cast<std::size_t>(2 * lmax + 1));
  par::for_each(exec, mtab.size(), [&](std::size_t idx) { mtab[idx] = basis.m_mat(static_cast<long>(idx) - lmax); });
  std::vector<Eigen::VectorXd> ntab(static_cast<std::size_t>(2 * lmax + 2));
  par::for_each(exec, ntab.size(), [&](std::size_t idx) { ntab[idx] = basis.n_vec(static_cast<long>(idx) - lmax); });

  std::vector<std::size_t> pts;
  for (std::size_t k = 0; k < fn.alpha.size(); ++k)
    if (fn.alpha[k] != 0.0) pts.push_back(k);

  // -1/2 int int |u - v|^{2H} dmu(u) dmu(v), accumulated row by row in order.
  const double kink = par::ordered_sum(exec, cells + pts.size(), [&](std::size_t r) {
    double acc = 0.0;
    if (r < cells) {
      const auto& ci = fn.coef[r];
      for (std::size_t j = 0; j < cells; ++j)
        acc += ci.dot(mtab[static_cast<std::size_t>(static_cast<long>(j) - static_cast<long>(r) + lmax)] *
                      fn.coef[j].transpose());
      for (std::size_t k : pts)
        acc += fn.alpha[k] *
               ci.dot(ntab[static_cast<std::size_t>(static_cast<long>(k) - static_cast<long>(r) + lmax)]);
      return acc;
    }
    const std::size_t k = pts[r - cells];
    for (std::size_t i = 0; i < cells; ++i)
      acc += fn.alpha[k] *
             fn.coef[i].dot(ntab[static_cast<std::size_t>(static_cast<long>(k) - static_cast<long>(i) + lmax)]);
    for (std::size_t j : pts)
      acc += fn.alpha[k] * fn.alpha[j] * std::pow(std::abs(static_cast<double>(k) - static_cast<double>(j)), h2);
    return acc;
  });
  (void)d;
  return m0 * m2 - 0.5 * kink;
}

struct Prepared {
  Eigen::MatrixXd e_step;  // exp(-A delta)
  Eigen::RowVectorXd e0;
};

Prepared prepare(const LinearGaussianModel& m, double delta) {
  if (m.a.rows() != m.a.cols() || m.sigma.rows() != m.a.rows() || m.sigma.cols() != m.a.rows() || m.a.rows() == 0)
    throw DomainError("Gaussian oracle: A and sigma must be d x d");
  if (!(delta > 0.0)) throw DomainError("Gaussian oracle: delta must be > 0");
  if (!(m.h > 0.0 && m.h < 1.0)) throw DomainError("Gaussian oracle: H must lie in (0,1)");
  Prepared p;
  p.e_step = (-m.a * delta).exp();
  p.e0 = Eigen::RowVectorXd::Unit(m.a.rows(), 0);
  return p;
}

}  // namespace

double discrete_variance(const LinearGaussianModel& m, double delta, std::size_t n, std::size_t burn_in,
                         par::Exec exec) {
  if (n == 0) throw DomainError("Gaussian oracle: n must be >= 1");
  const Prepared p = prepare(m, delta);
  const auto d = m.a.rows();
  const std::size_t cells = burn_in + n;
  // S_i = sum_{k = max(i+1, b+1)}^{b+n} E^{k-i}.
  std::vector<Eigen::MatrixXd> s(cells + 1, Eigen::MatrixXd::Zero(d, d));
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t i = cells; i-- > 0;)
    s[i] = i >= burn_in ? Eigen::MatrixXd(p.e_step * (id + s[i + 1])) : Eigen::MatrixXd(p.e_step * s[i + 1]);

  double total = 0.0;
  for (Eigen::Index mm = 0; mm < d; ++mm) {
    const Eigen::VectorXd sig = m.sigma.col(mm);
    CellBasis basis(m.a, delta, sig, m.h);
    Functional fn;
    fn.alpha.assign(cells + 1, 0.0);
    const double a0 = p.e0.dot(sig);
    for (std::size_t k = burn_in + 1; k <= cells; ++k) fn.alpha[k] = a0;
    fn.coef.resize(cells);
    const Eigen::RowVectorXd e0a = p.e0 * m.a;
    for (std::size_t i = 0; i < cells; ++i) fn.coef[i] = -delta * (e0a * s[i]);
    total += functional_variance(fn, basis, m.h, exec);
  }
  const double nn = static_cast<double>(n);
  return std::pow(delta, 2.0 * m.h) * total / (nn * nn);
}

double continuous_variance(const LinearGaussianModel& m, double delta, std::size_t n, std::size_t burn_in,
                           par::Exec exec) {
  if (n == 0) throw DomainError("Gaussian oracle: n must be >= 1");
  const Prepared p = prepare(m, delta);
  const auto d = m.a.rows();
  const std::size_t cells = burn_in + n;
  // pow_e[j] = E^j for j = 0..cells.
  std::vector<Eigen::MatrixXd> pow_e(cells + 1);
  pow_e[0] = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t j = 1; j <= cells; ++j) pow_e[j] = p.e_step * pow_e[j - 1];

  double total = 0.0;
  for (Eigen::Index mm = 0; mm < d; ++mm) {
    const Eigen::VectorXd sig = m.sigma.col(mm);
    CellBasis basis(m.a, delta, sig, m.h);
    Functional fn;
    fn.alpha.assign(cells + 1, 0.0);
    fn.coef.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      Eigen::RowVectorXd c = p.e0 * pow_e[cells - i];
      if (i < burn_in) c -= p.e0 * pow_e[burn_in - i];
      fn.coef[i] = delta * c;
    }
    total += functional_variance(fn, basis, m.h, exec);
  }
  const double t = delta * static_cast<double>(n);
  return std::pow(delta, 2.0 * m.h) * total / (t * t);
}

}  // namespace fbmlab::oracle
