#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fbmlab/fbm_sampler.hpp"
#include "fbmlab/sde.hpp"

namespace fbmlab {

/// Test function applied to the first coordinate of Y. All three are 1-Lipschitz.
enum class TestFunction { Identity, Sin, ClippedAbs };

struct FunctionSpec {
  TestFunction kind = TestFunction::Identity;
  double clip = 1.0;  ///< ClippedAbs: min(|x|, clip)

  double operator()(double x) const;
  double lipschitz() const noexcept { return 1.0; }
};

/// How r_list is interpreted: absolute thresholds or multiples of the oracle standard deviation.
enum class RUnits { Absolute, Sigma };

struct ExperimentConfig {
  double hurst = 0.5;
  KernelFamily kernel_family = KernelFamily::Volterra;
  double kernel_quad_tol = 1e-10;
  NoiseMethod noise = NoiseMethod::Cholesky;

  std::size_t dim = 1;
  DriftModel::Kind drift = DriftModel::Kind::Linear;
  std::vector<double> drift_a;  ///< d*d row-major, empty = identity
  std::vector<double> drift_c;  ///< empty = zeros
  double drift_alpha0 = 1.0;
  double drift_eps = 0.0;
  std::vector<double> sigma;  ///< d*d row-major, empty = identity
  std::vector<double> x0;     ///< empty = zeros

  FunctionSpec f;
  double delta = 1.0;
  double dt = 1.0 / 32.0;
  std::vector<double> n_list{16, 32, 64, 128};
  std::vector<double> t_list{16, 64};
  std::vector<double> r_list{0.5, 1.0, 2.0};
  RUnits r_units = RUnits::Absolute;
  std::vector<double> lambda_list{0.5, 1.0, 2.0};
  std::size_t replicas = 10000;
  std::size_t centering_replicas = 10000;
  std::uint64_t seed = 42;
  std::size_t burn_in = 0;
  double envelope_c = 1.0;
  double bounds_c_prime = 1.0;

  double sample_t_max = 1.0;
  std::size_t sample_n_steps = 256;
  std::size_t sample_paths = 1;

  std::vector<double> diagnose_k_list{1, 2, 4, 8, 16};
  std::vector<double> diagnose_x_list{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> diagnose_p_list{2, 4, 6, 8, 10, 12};
  std::size_t diagnose_paths = 10000;
  std::size_t diagnose_steps = 1024;
  std::size_t diagnose_dim = 1;
  double diagnose_eta = 0.25;
  double diagnose_eta_prime = 0.0;  ///< 0 selects the sub-Gaussian constant C_d

  /// Raw key/value pairs as read (for the manifest echo).
  std::map<std::string, std::string> raw;

  /// Throws ConfigError if an invariant fails (delta not a multiple of dt, ...).
  void validate() const;

  DriftModel make_drift() const;
  KernelSpec make_kernel() const;
  SdeSpec make_sde() const;

  /// Steps of size dt per observation spacing delta.
  std::size_t stride() const;
};

/// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses "key = value" lines ('#' starts a comment). Unknown or duplicate keys,
/// and unparsable values, throw ConfigError.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

}  // namespace fbmlab
