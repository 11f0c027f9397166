#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fbmlab/bounds.hpp"
#include "fbmlab/config.hpp"
#include "fbmlab/stats.hpp"

namespace fbmlab::occupation {

/// Consecutive stream ids [first, first + count).
struct ReplicaBlock {
  std::uint64_t first = 0;
  std::size_t count = 0;
  std::uint64_t last() const noexcept { return first + count; }
  bool overlaps(const ReplicaBlock& o) const noexcept { return first < o.last() && o.first < last(); }
};

/// Per-replica occupation statistics for several horizons of one simulated
/// family of paths (shorter horizons are prefixes of the longest).
struct StatisticSample {
  bounds::Horizon mode = bounds::Horizon::Discrete;
  std::vector<double> horizons;               ///< n (discrete) or T (continuous)
  std::vector<double> centering;              ///< mean raw statistic of the centering block
  std::vector<std::vector<double>> centered;  ///< [horizon][replica], evaluation block
  ReplicaBlock centering_block;
  ReplicaBlock evaluation_block;
};

/// Raw statistic (1/n) sum_{k=b+1}^{b+n} f(Y_{k delta}) or the trapezoidal
/// (1/T) int_{b delta}^{b delta + T} f(Y_t) dt, from the first coordinate.
double raw_statistic(const SamplePath& y, const ExperimentConfig& cfg, bounds::Horizon mode, double horizon);

/// Simulates both blocks and centers the evaluation block with the centering block's mean.
StatisticSample simulate(const ExperimentConfig& cfg, bounds::Horizon mode, const std::vector<double>& horizons,
                         ReplicaBlock centering, ReplicaBlock evaluation, par::Exec exec = par::Exec::Parallel);

struct TailRow {
  double h = 0.0;
  bounds::Horizon mode = bounds::Horizon::Discrete;
  double horizon = 0.0;
  double delta = 1.0;
  double r = 0.0;
  double r_sigma = 0.0;  ///< r / oracle sd when available, else NaN
  std::size_t exceed = 0;
  McEstimate estimate;
  double envelope = 1.0;
  bool censored = false;
  double upper_bound = 1.0;   ///< one-sided 95% Clopper-Pearson upper bound
  double oracle_tail = 0.0;   ///< Gaussian-oracle tail when available, else NaN
  double oracle_sd = 0.0;     ///< NaN when unavailable
};

struct OccupationResult {
  StatisticSample sample;
  std::vector<TailRow> rows;
};

/// Oracle standard deviation of the statistic (linear drift, identity f); NaN otherwise.
double oracle_sd(const ExperimentConfig& cfg, bounds::Horizon mode, double horizon,
                 par::Exec exec = par::Exec::Parallel);

/// Tail table P(statistic > r) for every (horizon, r) of the configuration.
/// Streams: centering block [0, centering_replicas), evaluation block right after it.
OccupationResult run_occupation_discrete(const ExperimentConfig& cfg, par::Exec exec = par::Exec::Parallel);
OccupationResult run_occupation_continuous(const ExperimentConfig& cfg, par::Exec exec = par::Exec::Parallel);

/// Tail rows for a simulated sample at explicit thresholds (absolute units).
std::vector<TailRow> tail_rows(const ExperimentConfig& cfg, const StatisticSample& s,
                               const std::vector<std::vector<double>>& thresholds,
                               const std::vector<double>& sds);

struct ExponentRow {
  double h = 0.0;
  std::string quantity;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double target = 0.0;
  bool reliable = true;  ///< MGF rows: every effective sample size >= 100
  double min_ess = 0.0;
};

/// (a) slope of log oracle variance against log n, target (2H v 1) - 2;
/// (b) for each lambda, slope of log q(n) against log n where
///     q(n) = log E exp(lambda_n G_n) / lambda_n^2, G_n = n * statistic / lip and
///     lambda_n = lambda n^{-(2H v 1)/2}; target 2H v 1.
std::vector<ExponentRow> fit_scaling_exponent(const ExperimentConfig& cfg, const StatisticSample* mc,
                                              par::Exec exec = par::Exec::Parallel);

struct DominationRow {
  double horizon = 0.0;
  double z = 0.0;  ///< scaled threshold, r = z n^{((2H v 1) - 2)/2}
  double r = 0.0;
  double calibration_tail = 0.0;
  double evaluation_tail = 0.0;
  double evaluation_lower = 0.0;  ///< Bonferroni one-sided lower bound
  double envelope = 1.0;
  bool dominated = true;
};

struct DominationReport {
  double h = 0.0;
  double calibrated_c = 0.0;
  double n_calibration = 0.0;
  double n_evaluation = 0.0;
  double joint_confidence = 0.99;
  std::vector<DominationRow> rows;
  bool pass = false;
};

/// Calibrates the occupation-envelope constant on the calibration block at
/// n_cal and checks the evaluation block at n_cal and n_eval.
DominationReport check_envelope_domination(const ExperimentConfig& cfg, double n_cal, double n_eval,
                                           const std::vector<double>& z_grid, ReplicaBlock centering,
                                           ReplicaBlock calibration, ReplicaBlock evaluation,
                                           par::Exec exec = par::Exec::Parallel);

}  // namespace fbmlab::occupation
