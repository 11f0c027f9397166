#include "fbmlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

namespace fbmlab {

double FunctionSpec::operator()(double x) const {
  switch (kind) {
    case TestFunction::Identity: return x;
    case TestFunction::Sin: return std::sin(x);
    case TestFunction::ClippedAbs: return std::min(std::abs(x), clip);
  }
  return x;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config key '" + key + "': empty list element");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

template <class E>
E to_enum(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> opts) {
  for (const auto& [name, e] : opts)
    if (v == name) return e;
  std::string allowed;
  for (const auto& o : opts) allowed += std::string(allowed.empty() ? "" : "|") + o.first;
  throw ConfigError("config key '" + key + "': expected " + allowed + ", got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"hurst", [](auto& c, auto& k, auto& v) { c.hurst = to_double(k, v); }},
      {"kernel.family", [](auto& c, auto& k, auto& v) {
         c.kernel_family = to_enum<KernelFamily>(k, v, {{"volterra", KernelFamily::Volterra}, {"liouville", KernelFamily::Liouville}});
       }},
      {"kernel.quad_tol", [](auto& c, auto& k, auto& v) { c.kernel_quad_tol = to_double(k, v); }},
      {"noise.method", [](auto& c, auto& k, auto& v) {
         c.noise = to_enum<NoiseMethod>(k, v, {{"cholesky", NoiseMethod::Cholesky}, {"volterra", NoiseMethod::Volterra}});
       }},
      {"sde.dim", [](auto& c, auto& k, auto& v) { c.dim = to_u64(k, v); }},
      {"sde.drift", [](auto& c, auto& k, auto& v) {
         c.drift = to_enum<DriftModel::Kind>(k, v, {{"linear", DriftModel::Kind::Linear}, {"perturbed_linear", DriftModel::Kind::PerturbedLinear}});
       }},
      {"sde.drift.a", [](auto& c, auto& k, auto& v) { c.drift_a = to_list(k, v); }},
      {"sde.drift.c", [](auto& c, auto& k, auto& v) { c.drift_c = to_list(k, v); }},
      {"sde.drift.alpha0", [](auto& c, auto& k, auto& v) { c.drift_alpha0 = to_double(k, v); }},
      {"sde.drift.eps", [](auto& c, auto& k, auto& v) { c.drift_eps = to_double(k, v); }},
      {"sde.sigma", [](auto& c, auto& k, auto& v) { c.sigma = to_list(k, v); }},
      {"sde.x0", [](auto& c, auto& k, auto& v) { c.x0 = to_list(k, v); }},
      {"f", [](auto& c, auto& k, auto& v) {
         c.f.kind = to_enum<TestFunction>(k, v, {{"identity", TestFunction::Identity}, {"sin", TestFunction::Sin}, {"clipped_abs", TestFunction::ClippedAbs}});
       }},
      {"f.clip", [](auto& c, auto& k, auto& v) { c.f.clip = to_double(k, v); }},
      {"delta", [](auto& c, auto& k, auto& v) { c.delta = to_double(k, v); }},
      {"dt", [](auto& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
      {"n_list", [](auto& c, auto& k, auto& v) { c.n_list = to_list(k, v); }},
      {"t_list", [](auto& c, auto& k, auto& v) { c.t_list = to_list(k, v); }},
      {"r_list", [](auto& c, auto& k, auto& v) { c.r_list = to_list(k, v); }},
      {"r_units", [](auto& c, auto& k, auto& v) {
         c.r_units = to_enum<RUnits>(k, v, {{"absolute", RUnits::Absolute}, {"sigma", RUnits::Sigma}});
       }},
      {"lambda_list", [](auto& c, auto& k, auto& v) { c.lambda_list = to_list(k, v); }},
      {"replicas", [](auto& c, auto& k, auto& v) { c.replicas = to_u64(k, v); }},
      {"centering_replicas", [](auto& c, auto& k, auto& v) { c.centering_replicas = to_u64(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = to_u64(k, v); }},
      {"burn_in", [](auto& c, auto& k, auto& v) { c.burn_in = to_u64(k, v); }},
      {"envelope.c", [](auto& c, auto& k, auto& v) { c.envelope_c = to_double(k, v); }},
      {"bounds.c_prime", [](auto& c, auto& k, auto& v) { c.bounds_c_prime = to_double(k, v); }},
      {"sample.t_max", [](auto& c, auto& k, auto& v) { c.sample_t_max = to_double(k, v); }},
      {"sample.n_steps", [](auto& c, auto& k, auto& v) { c.sample_n_steps = to_u64(k, v); }},
      {"sample.paths", [](auto& c, auto& k, auto& v) { c.sample_paths = to_u64(k, v); }},
      {"diagnose.k_list", [](auto& c, auto& k, auto& v) { c.diagnose_k_list = to_list(k, v); }},
      {"diagnose.x_list", [](auto& c, auto& k, auto& v) { c.diagnose_x_list = to_list(k, v); }},
      {"diagnose.p_list", [](auto& c, auto& k, auto& v) { c.diagnose_p_list = to_list(k, v); }},
      {"diagnose.paths", [](auto& c, auto& k, auto& v) { c.diagnose_paths = to_u64(k, v); }},
      {"diagnose.steps", [](auto& c, auto& k, auto& v) { c.diagnose_steps = to_u64(k, v); }},
      {"diagnose.dim", [](auto& c, auto& k, auto& v) { c.diagnose_dim = to_u64(k, v); }},
      {"diagnose.eta", [](auto& c, auto& k, auto& v) { c.diagnose_eta = to_double(k, v); }},
      {"diagnose.eta_prime", [](auto& c, auto& k, auto& v) { c.diagnose_eta_prime = to_double(k, v); }},
  };
  return table;
}

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& s) { return s.first == key; });
    if (it == table.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (cfg.raw.count(key)) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    it->second(cfg, key, value);
    cfg.raw[key] = value;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::size_t ExperimentConfig::stride() const {
  return static_cast<std::size_t>(std::llround(delta / dt));
}

void ExperimentConfig::validate() const {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("hurst must lie in (0,1)");
  if (!(kernel_quad_tol > 0.0)) throw ConfigError("kernel.quad_tol must be > 0");
  if (dim == 0) throw ConfigError("sde.dim must be >= 1");
  const std::size_t d2 = dim * dim;
  if (!drift_a.empty() && drift_a.size() != d2) throw ConfigError("sde.drift.a needs dim*dim entries");
  if (!sigma.empty() && sigma.size() != d2) throw ConfigError("sde.sigma needs dim*dim entries");
  if (!drift_c.empty() && drift_c.size() != dim) throw ConfigError("sde.drift.c needs dim entries");
  if (!x0.empty() && x0.size() != dim) throw ConfigError("sde.x0 needs dim entries");
  if (!(delta > 0.0) || !(dt > 0.0)) throw ConfigError("delta and dt must be > 0");
  const double ratio = delta / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
    throw ConfigError("delta must be an integer multiple of dt");
  for (double n : n_list)
    if (!is_integer(n) || n < 1.0) throw ConfigError("n_list entries must be positive integers");
  for (double t : t_list) {
    if (!(t >= 1.0)) throw ConfigError("t_list entries must be >= 1");
    const double steps = t / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) throw ConfigError("t_list entries must be multiples of dt");
  }
  for (double r : r_list)
    if (!(r >= 0.0)) throw ConfigError("r_list entries must be >= 0");
  for (double l : lambda_list)
    if (!(l >= 0.0)) throw ConfigError("lambda_list entries must be >= 0");
  if (replicas == 0 || centering_replicas == 0) throw ConfigError("replica counts must be >= 1");
  if (!(envelope_c > 0.0) || !(bounds_c_prime > 0.0)) throw ConfigError("envelope.c and bounds.c_prime must be > 0");
  if (f.kind == TestFunction::ClippedAbs && !(f.clip > 0.0)) throw ConfigError("f.clip must be > 0");
  if (!(sample_t_max > 0.0) || sample_n_steps == 0 || sample_paths == 0)
    throw ConfigError("sample.t_max, sample.n_steps and sample.paths must be positive");
  for (double k : diagnose_k_list)
    if (!is_integer(k) || k < 1.0) throw ConfigError("diagnose.k_list entries must be positive integers");
  for (double p : diagnose_p_list)
    if (!is_integer(p) || p < 2.0) throw ConfigError("diagnose.p_list entries must be integers >= 2");
  for (double x : diagnose_x_list)
    if (!(x >= 0.0)) throw ConfigError("diagnose.x_list entries must be >= 0");
  if (diagnose_paths == 0 || diagnose_steps < 2 || diagnose_dim == 0)
    throw ConfigError("diagnose.paths, diagnose.steps and diagnose.dim must be positive (steps >= 2)");
  if (!(diagnose_eta > 0.0) || diagnose_eta_prime < 0.0) throw ConfigError("diagnose.eta must be > 0, eta_prime >= 0");
  if (r_units == RUnits::Sigma && (drift != DriftModel::Kind::Linear || f.kind != TestFunction::Identity))
    throw ConfigError("r_units = sigma needs a linear drift and f = identity (Gaussian oracle)");
}

DriftModel ExperimentConfig::make_drift() const {
  const auto d = static_cast<Eigen::Index>(dim);
  if (drift == DriftModel::Kind::PerturbedLinear) return DriftModel::perturbed_linear(drift_alpha0, drift_eps, dim);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d);
  if (!drift_a.empty())
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) a(i, j) = drift_a[static_cast<std::size_t>(i * d + j)];
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < drift_c.size(); ++i) c(static_cast<Eigen::Index>(i)) = drift_c[i];
  return DriftModel::linear(a, c);
}

KernelSpec ExperimentConfig::make_kernel() const {
  quad::QuadOptions q;
  q.rel_tol = kernel_quad_tol;
  return KernelSpec(HurstParameter(hurst), kernel_family, q);
}

SdeSpec ExperimentConfig::make_sde() const {
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(d, d);
  if (!sigma.empty())
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) s(i, j) = sigma[static_cast<std::size_t>(i * d + j)];
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < x0.size(); ++i) x(static_cast<Eigen::Index>(i)) = x0[i];
  return SdeSpec{make_drift(), s, x, make_kernel()};
}

}  // namespace fbmlab
