#pragma once

#include <cstddef>
#include <vector>

#include "fbmlab/hurst.hpp"
#include "fbmlab/parallel_kernels.hpp"

namespace fbmlab::bounds {

enum class Horizon { Discrete, Continuous };

/// Psi_H(u,k): u^{2H-3} for H <= 1/2, k^{1-2H} u^{4H-4} + u^{2H-3} for H > 1/2,
/// scaled by c_prime. H = 1/2 uses the first branch.
double psi_big(const HurstParameter& h, double u, std::size_t k, double c_prime = 1.0);

/// psi_{n,k} = sum_{u=1}^{n-k+1} sqrt(Psi_H(u,k)).
double psi_discrete(const HurstParameter& h, std::size_t n, std::size_t k);

/// psi'_{T,k} = int_0^{T-k+1} sqrt(Psi_H(max(u,1),k)) du.
double psi_continuous(const HurstParameter& h, double t_horizon, std::size_t k);

/// psi values for k = 1..n (Discrete) or k = 1..ceil(T) (Continuous) with their squared sum.
struct BoundProfile {
  HurstParameter hurst;
  Horizon mode;
  double horizon;
  std::vector<double> psi;
  std::vector<double> psi_sq_cumsum;
  double sum_psi_sq = 0.0;
  double growth_exponent = 1.0;
};

BoundProfile sum_psi_squared(const HurstParameter& h, Horizon mode, double n_or_t,
                             par::Exec exec = par::Exec::Parallel);

/// exp(2 max(1,c) zeta lambda^2).
double moment_to_expmoment_bound(double c, double zeta, double lambda);

/// exp(-r^2 / (4 C lip^2 n^{2H v 1})), n read as T in Continuous mode.
double concentration_envelope(const HurstParameter& h, double n_or_t, double lip, double c_const,
                              double r, Horizon mode);

/// exp(-r^2 n^{2-(2H v 1)} / (4 C lip^2)).
double occupation_envelope(const HurstParameter& h, double n_or_t, double lip, double c_const,
                           double r, Horizon mode);

struct LemmaIntegralReport {
  std::vector<double> u;
  std::vector<double> integral;
  std::vector<double> ratio;  ///< integral * (u-1)^beta
  double sup_ratio = 0.0;
  /// |ratio(u_last) - ratio(u_prev_octave)| / ratio(u_prev_octave); NaN if the grid has no octave.
  double last_octave_change = 0.0;
  bool finite = false;
};

/// int_2^u exp(-alpha (u-v)) (v-1)^{-beta} dv and its ratio to (u-1)^{-beta} over the grid.
LemmaIntegralReport check_lemma_integral(double alpha, double beta, const std::vector<double>& u_grid);

}  // namespace fbmlab::bounds
