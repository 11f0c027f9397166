#include "fbmlab/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbmlab/gaussian_oracle.hpp"

namespace fbmlab::occupation {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t horizon_steps(const ExperimentConfig& cfg, bounds::Horizon mode, double horizon) {
  const std::size_t burn = cfg.burn_in * cfg.stride();
  if (mode == bounds::Horizon::Discrete) return burn + static_cast<std::size_t>(horizon) * cfg.stride();
  return burn + static_cast<std::size_t>(std::llround(horizon / cfg.dt));
}

// raw[horizon][replica] for one replica block.
std::vector<std::vector<double>> simulate_raw(const ExperimentConfig& cfg, bounds::Horizon mode,
                                              const std::vector<double>& horizons, ReplicaBlock block,
                                              par::Exec exec) {
  std::size_t steps = 0;
  for (double hz : horizons) steps = std::max(steps, horizon_steps(cfg, mode, hz));
  const TimeGrid grid(static_cast<double>(steps) * cfg.dt, steps);
  const SdeSpec sde = cfg.make_sde();
  const FbmBatchSampler sampler(cfg.noise, sde.kernel, grid, cfg.dim);

  std::vector<std::vector<double>> raw(horizons.size(), std::vector<double>(block.count));
  par::for_each_chunk(exec, block.count, FbmBatchSampler::kBlock, [&](std::size_t begin, std::size_t end) {
    const auto paths = sampler.sample(cfg.seed, block.first + begin, end - begin);
    for (std::size_t r = begin; r < end; ++r) {
      const SamplePath y = integrate(sde, paths[r - begin]);
      for (std::size_t i = 0; i < horizons.size(); ++i) raw[i][r] = raw_statistic(y, cfg, mode, horizons[i]);
    }
  });
  return raw;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

double raw_statistic(const SamplePath& y, const ExperimentConfig& cfg, bounds::Horizon mode, double horizon) {
  const std::size_t s = cfg.stride();
  const std::size_t b = cfg.burn_in * s;
  if (mode == bounds::Horizon::Discrete) {
    const auto n = static_cast<std::size_t>(horizon);
    if (b + n * s >= y.size()) throw DomainError("path too short for the requested horizon");
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += cfg.f(y(b + k * s, 0));
    return acc / static_cast<double>(n);
  }
  const auto m = static_cast<std::size_t>(std::llround(horizon / cfg.dt));
  if (b + m >= y.size()) throw DomainError("path too short for the requested horizon");
  double acc = 0.5 * (cfg.f(y(b, 0)) + cfg.f(y(b + m, 0)));
  for (std::size_t j = 1; j < m; ++j) acc += cfg.f(y(b + j, 0));
  return acc * cfg.dt / horizon;
}

StatisticSample simulate(const ExperimentConfig& cfg, bounds::Horizon mode, const std::vector<double>& horizons,
                         ReplicaBlock centering, ReplicaBlock evaluation, par::Exec exec) {
  if (centering.overlaps(evaluation)) throw DomainError("centering and evaluation blocks must be disjoint");
  StatisticSample s;
  s.mode = mode;
  s.horizons = horizons;
  s.centering_block = centering;
  s.evaluation_block = evaluation;
  const auto cen = simulate_raw(cfg, mode, horizons, centering, exec);
  s.centered = simulate_raw(cfg, mode, horizons, evaluation, exec);
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    s.centering.push_back(mean_of(cen[i]));
    for (double& x : s.centered[i]) x -= s.centering[i];
  }
  return s;
}

double oracle_sd(const ExperimentConfig& cfg, bounds::Horizon mode, double horizon, par::Exec exec) {
  if (cfg.drift != DriftModel::Kind::Linear || cfg.f.kind != TestFunction::Identity) return kNaN;
  const auto model = oracle::model_from(cfg.make_sde());
  if (mode == bounds::Horizon::Discrete)
    return std::sqrt(oracle::discrete_variance(model, cfg.delta, static_cast<std::size_t>(horizon), cfg.burn_in, exec));
  const double cells = horizon / cfg.delta;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells) return kNaN;
  return std::sqrt(oracle::continuous_variance(model, cfg.delta, static_cast<std::size_t>(std::llround(cells)),
                                               cfg.burn_in, exec));
}

std::vector<TailRow> tail_rows(const ExperimentConfig& cfg, const StatisticSample& s,
                               const std::vector<std::vector<double>>& thresholds, const std::vector<double>& sds) {
  const HurstParameter hp(cfg.hurst);
  std::vector<TailRow> rows;
  for (std::size_t i = 0; i < s.horizons.size(); ++i) {
    const auto& stat = s.centered[i];
    for (double r : thresholds[i]) {
      TailRow row;
      row.h = cfg.hurst;
      row.mode = s.mode;
      row.horizon = s.horizons[i];
      row.delta = cfg.delta;
      row.r = r;
      std::vector<double> ind(stat.size());
      for (std::size_t j = 0; j < stat.size(); ++j) ind[j] = stat[j] > r ? 1.0 : 0.0;
      row.exceed = static_cast<std::size_t>(std::count(ind.begin(), ind.end(), 1.0));
      row.estimate = mc_mean(ind, cfg.seed, s.evaluation_block.first);
      row.censored = row.exceed == 0;
      row.upper_bound = binomial_upper_bound(row.exceed, stat.size(), 0.05);
      row.envelope = bounds::occupation_envelope(hp, row.horizon, cfg.f.lipschitz(), cfg.envelope_c, r, s.mode);
      row.oracle_sd = sds[i];
      row.r_sigma = std::isfinite(sds[i]) ? r / sds[i] : kNaN;
      row.oracle_tail = std::isfinite(sds[i]) ? normal_sf(r / sds[i]) : kNaN;
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

OccupationResult run(const ExperimentConfig& cfg, bounds::Horizon mode, const std::vector<double>& horizons,
                     par::Exec exec) {
  const ReplicaBlock centering{0, cfg.centering_replicas};
  const ReplicaBlock evaluation{cfg.centering_replicas, cfg.replicas};
  OccupationResult res;
  res.sample = simulate(cfg, mode, horizons, centering, evaluation, exec);
  std::vector<double> sds;
  std::vector<std::vector<double>> thr;
  for (double hz : horizons) {
    const double sd = oracle_sd(cfg, mode, hz, exec);
    sds.push_back(sd);
    std::vector<double> r = cfg.r_list;
    if (cfg.r_units == RUnits::Sigma)
      for (double& x : r) x *= sd;
    thr.push_back(r);
  }
  res.rows = tail_rows(cfg, res.sample, thr, sds);
  return res;
}

}  // namespace

OccupationResult run_occupation_discrete(const ExperimentConfig& cfg, par::Exec exec) {
  return run(cfg, bounds::Horizon::Discrete, cfg.n_list, exec);
}

OccupationResult run_occupation_continuous(const ExperimentConfig& cfg, par::Exec exec) {
  return run(cfg, bounds::Horizon::Continuous, cfg.t_list, exec);
}

std::vector<ExponentRow> fit_scaling_exponent(const ExperimentConfig& cfg, const StatisticSample* mc, par::Exec exec) {
  const double g = HurstParameter(cfg.hurst).growth_exponent();
  std::vector<ExponentRow> out;
  if (cfg.n_list.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(cfg.n_list.begin(), cfg.n_list.end());
    if (*hi < 8.0 * *lo) throw DomainError("exponent fit needs n_list to span at least 3 octaves");
  }
  if (cfg.drift == DriftModel::Kind::Linear && cfg.f.kind == TestFunction::Identity) {
    std::vector<double> lx, ly;
    for (double n : cfg.n_list) {
      const double sd = oracle_sd(cfg, bounds::Horizon::Discrete, n, exec);
      lx.push_back(std::log(n));
      ly.push_back(2.0 * std::log(sd));
    }
    const auto fit = fit_line(lx, ly);
    out.push_back({cfg.hurst, "oracle_variance", fit.slope, fit.slope_stderr, g - 2.0, true, 0.0});
  }
  if (mc && mc->mode == bounds::Horizon::Discrete) {
    for (double lambda : cfg.lambda_list) {
      if (lambda <= 0.0) continue;
      std::vector<double> lx, ly;
      double min_ess = INFINITY;
      bool usable = true;
      for (std::size_t i = 0; i < mc->horizons.size(); ++i) {
        const double n = mc->horizons[i];
        const double ln = lambda * std::pow(n, -g / 2.0);
        std::vector<double> e(mc->centered[i].size());
        for (std::size_t j = 0; j < e.size(); ++j) e[j] = ln * n * mc->centered[i][j] / cfg.f.lipschitz();
        const double mx = *std::max_element(e.begin(), e.end());
        double sw = 0.0, sw2 = 0.0;
        for (double x : e) {
          const double w = std::exp(x - mx);
          sw += w;
          sw2 += w * w;
        }
        min_ess = std::min(min_ess, sw * sw / sw2);
        const double log_m = mx + std::log(sw / static_cast<double>(e.size()));
        const double q = log_m / (ln * ln);
        if (!(q > 0.0)) {
          usable = false;
          continue;
        }
        lx.push_back(std::log(n));
        ly.push_back(std::log(q));
      }
      ExponentRow row{cfg.hurst, "mgf_coefficient(lambda=" + format_double(lambda) + ")", kNaN, kNaN, g, false, min_ess};
      if (lx.size() >= 2) {
        const auto fit = fit_line(lx, ly);
        row.slope = fit.slope;
        row.slope_stderr = fit.slope_stderr;
        row.reliable = usable && min_ess >= 100.0;
      }
      out.push_back(row);
    }
  }
  return out;
}

DominationReport check_envelope_domination(const ExperimentConfig& cfg, double n_cal, double n_eval,
                                           const std::vector<double>& z_grid, ReplicaBlock centering,
                                           ReplicaBlock calibration, ReplicaBlock evaluation, par::Exec exec) {
  if (centering.overlaps(calibration) || centering.overlaps(evaluation) || calibration.overlaps(evaluation))
    throw DomainError("centering, calibration and evaluation blocks must be disjoint");
  const auto mode = bounds::Horizon::Discrete;
  const std::vector<double> horizons{n_cal, n_eval};
  const auto cen = simulate_raw(cfg, mode, horizons, centering, exec);
  auto cal = simulate_raw(cfg, mode, horizons, calibration, exec);
  auto ev = simulate_raw(cfg, mode, horizons, evaluation, exec);
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const double m = mean_of(cen[i]);
    for (double& x : cal[i]) x -= m;
    for (double& x : ev[i]) x -= m;
  }

  const double g = HurstParameter(cfg.hurst).growth_exponent();
  const double lip = cfg.f.lipschitz();
  auto threshold = [&](double n, double z) { return z * std::pow(n, (g - 2.0) / 2.0); };
  auto tail = [](const std::vector<double>& v, double r, std::size_t& k) {
    k = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [r](double x) { return x > r; }));
    return static_cast<double>(k) / static_cast<double>(v.size());
  };

  DominationReport rep;
  rep.h = cfg.hurst;
  rep.n_calibration = n_cal;
  rep.n_evaluation = n_eval;
  // Smallest C with exp(-z^2 / (4 C lip^2)) >= calibration tail for every z.
  double c = 0.0;
  for (double z : z_grid) {
    if (z <= 0.0) continue;
    std::size_t k = 0;
    const double p = tail(cal[0], threshold(n_cal, z), k);
    if (k == 0) continue;
    if (k == cal[0].size()) throw DomainError("envelope calibration failed: tail equals 1 at z > 0");
    c = std::max(c, z * z / (4.0 * lip * lip * -std::log(p)));
  }
  if (!(c > 0.0)) throw DomainError("envelope calibration failed: no exceedances in the calibration block");
  rep.calibrated_c = c;

  std::size_t tests = 0;
  for (double z : z_grid)
    if (z > 0.0) tests += horizons.size();
  const double alpha = (1.0 - rep.joint_confidence) / static_cast<double>(std::max<std::size_t>(tests, 1));

  rep.pass = true;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    for (double z : z_grid) {
      DominationRow row;
      row.horizon = horizons[i];
      row.z = z;
      row.r = threshold(horizons[i], z);
      std::size_t kc = 0, ke = 0;
      row.calibration_tail = tail(cal[i], row.r, kc);
      row.evaluation_tail = tail(ev[i], row.r, ke);
      row.evaluation_lower = z > 0.0 ? binomial_lower_bound(ke, ev[i].size(), alpha) : row.evaluation_tail;
      row.envelope = bounds::occupation_envelope(HurstParameter(cfg.hurst), horizons[i], lip, c, row.r, mode);
      row.dominated = row.evaluation_lower <= row.envelope;
      rep.pass = rep.pass && row.dominated;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace fbmlab::occupation
