#include "fbmlab/cli.hpp"

#include <boost/version.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "fbmlab/acceptance.hpp"
#include "fbmlab/bounds.hpp"
#include "fbmlab/config.hpp"
#include "fbmlab/errors.hpp"
#include "fbmlab/gaussian_diagnostics.hpp"
#include "fbmlab/occupation.hpp"
#include "fbmlab/parallel_kernels.hpp"
#include "fbmlab/report.hpp"
#include "fbmlab/sde.hpp"
#include "fbmlab/tables.hpp"

namespace fbmlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using report::PlotSpec;
using report::RunDirectory;

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out = "fbmlab_run";
  std::string format = "csv";
};

json versions() {
  return {{"fbmlab", kVersion},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION}};
}

json stream_range(std::uint64_t first, std::uint64_t last) { return {{"first", first}, {"last", last}}; }

class Run {
 public:
  Run(const std::string& command, const Options& o, int threads, const ExperimentConfig& cfg)
      : dir_(o.out, report::parse_format(o.format)), start_(std::chrono::steady_clock::now()) {
    auto& m = dir_.manifest();
    m["command"] = command;
    m["seed"] = cfg.seed;
    m["threads"] = threads;
    m["config_file"] = o.config;
    m["config"] = cfg.raw;
    m["versions"] = versions();
    m["stream_ranges"] = json::object();
  }
  RunDirectory& dir() { return dir_; }
  void finish() {
    dir_.manifest()["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    dir_.finish();
  }

 private:
  RunDirectory dir_;
  std::chrono::steady_clock::time_point start_;
};

PlotSpec plot(std::string table, std::string file, std::string title, std::string x, std::vector<std::string> y,
              std::string group = "", bool log_x = false, bool log_y = false) {
  return {std::move(table), std::move(file), std::move(title), std::move(x), std::move(y), std::move(group),
          log_x, log_y};
}

std::vector<std::string> component_columns(std::size_t dim) {
  std::vector<std::string> c;
  for (std::size_t i = 0; i < dim; ++i) c.push_back("comp_" + std::to_string(i));
  return c;
}

int cmd_paths(bool integrate_sde, const ExperimentConfig& cfg, Run& run, std::ostream& out) {
  const SdeSpec sde = cfg.make_sde();
  const TimeGrid grid(cfg.sample_t_max, cfg.sample_n_steps);
  for (std::size_t i = 0; i < cfg.sample_paths; ++i) {
    RngStream rng(cfg.seed, i);
    SamplePath p = sample_fbm(cfg.noise, sde.kernel, grid, cfg.dim, rng);
    if (integrate_sde) p = integrate(sde, p);
    const std::string name = "path_" + std::to_string(i);
    run.dir().write_table(name, tables::path(p));
    if (i < 4) run.dir().add_plot(plot(name, name, (integrate_sde ? "SDE path " : "fBm path ") + std::to_string(i), "t",
                                       component_columns(cfg.dim)));
  }
  run.dir().manifest()["stream_ranges"]["paths"] = stream_range(0, cfg.sample_paths);
  out << "wrote " << cfg.sample_paths << " path(s) to " << run.dir().root().string() << '\n';
  return kExitPass;
}

int cmd_bounds(const ExperimentConfig& cfg, Run& run, std::ostream& out) {
  const HurstParameter h(cfg.hurst);
  std::vector<bounds::BoundProfile> disc, cont;
  for (double n : cfg.n_list) disc.push_back(bounds::sum_psi_squared(h, bounds::Horizon::Discrete, n));
  for (double t : cfg.t_list) cont.push_back(bounds::sum_psi_squared(h, bounds::Horizon::Continuous, t));
  // Psi scales linearly in C', so psi picks up sqrt(C').
  const double cp = cfg.bounds_c_prime;
  for (auto* profiles : {&disc, &cont})
    for (auto& p : *profiles) {
      for (double& v : p.psi) v *= std::sqrt(cp);
      for (double& v : p.psi_sq_cumsum) v *= cp;
      p.sum_psi_sq *= cp;
    }
  run.dir().write_table("bounds_discrete", tables::bounds(disc));
  run.dir().write_table("bounds_continuous", tables::bounds(cont));
  run.dir().add_plot(plot("bounds_discrete", "bounds_discrete", "cumulative sum of psi^2 (discrete)", "k",
                          {"psi_sq_cumsum"}, "n_or_T", true, true));
  run.dir().add_plot(plot("bounds_continuous", "bounds_continuous", "cumulative sum of psi'^2 (continuous)", "k",
                          {"psi_sq_cumsum"}, "n_or_T", true, true));
  for (const auto& p : disc) out << "n=" << p.horizon << " sum psi^2=" << p.sum_psi_sq << '\n';
  for (const auto& p : cont) out << "T=" << p.horizon << " sum psi'^2=" << p.sum_psi_sq << '\n';
  return kExitPass;
}

int cmd_diagnose(const ExperimentConfig& cfg, Run& run, std::ostream& out) {
  std::vector<std::size_t> ks;
  for (double k : cfg.diagnose_k_list) ks.push_back(static_cast<std::size_t>(k));
  const auto holder = diag::check_g_holder_bound(cfg.make_kernel(), ks);
  run.dir().write_table("holder", tables::holder(holder));
  run.dir().add_plot(plot("holder", "holder", "increment second moment / |v-v'|^(2 alpha)", "v", {"bound_ratio"}, "k"));

  const auto samples = diag::sample_bm_suprema(cfg.diagnose_dim, cfg.diagnose_paths, cfg.diagnose_steps, cfg.seed);
  std::vector<diag::SupTail> tails;
  std::vector<diag::SupMoment> moments;
  for (double x : cfg.diagnose_x_list) tails.push_back(diag::sup_bm_tail(samples, x, cfg.diagnose_dim));
  const double eta_prime = cfg.diagnose_eta_prime > 0.0 ? cfg.diagnose_eta_prime : -1.0;
  for (double p : cfg.diagnose_p_list)
    moments.push_back(diag::sup_bm_moment(samples, static_cast<int>(p), cfg.diagnose_dim, cfg.diagnose_eta, eta_prime));
  run.dir().write_table("sup_norm", tables::sup_norm(tails, moments));
  run.dir().add_plot(plot("sup_norm", "sup_tail", "P(sup |W| > x) and sub-Gaussian comparator", "x",
                          {"estimate", "comparator"}, "", false, true));
  run.dir().manifest()["stream_ranges"]["sup_paths"] = stream_range(0, cfg.diagnose_paths);
  out << "H=" << cfg.hurst << " Hoelder variation beyond k=4: " << holder.variation_beyond_4
      << (holder.pass ? " (bounded)" : " (not bounded)") << '\n';
  return kExitPass;
}

int cmd_experiment(const ExperimentConfig& cfg, Run& run, std::ostream& out) {
  const auto disc = occupation::run_occupation_discrete(cfg);
  const auto cont = occupation::run_occupation_continuous(cfg);
  const auto exps = occupation::fit_scaling_exponent(cfg, &disc.sample);
  run.dir().write_table("tails_discrete", tables::tails(disc.rows));
  run.dir().write_table("tails_discrete_details", tables::tail_details(disc.rows));
  run.dir().write_table("tails_continuous", tables::tails(cont.rows));
  run.dir().write_table("tails_continuous_details", tables::tail_details(cont.rows));
  run.dir().write_table("exponents", tables::exponents(exps));
  run.dir().write_table("statistics_discrete", tables::statistics(disc.sample));
  run.dir().write_table("statistics_continuous", tables::statistics(cont.sample));
  run.dir().add_plot(plot("tails_discrete", "tails_discrete", "discrete occupation tails", "r",
                          {"estimate", "envelope"}, "n_or_T", false, true));
  run.dir().add_plot(plot("tails_continuous", "tails_continuous", "continuous occupation tails", "r",
                          {"estimate", "envelope"}, "n_or_T", false, true));
  auto& sr = run.dir().manifest()["stream_ranges"];
  sr["centering"] = stream_range(disc.sample.centering_block.first, disc.sample.centering_block.last());
  sr["evaluation"] = stream_range(disc.sample.evaluation_block.first, disc.sample.evaluation_block.last());
  sr["disjoint"] = !disc.sample.centering_block.overlaps(disc.sample.evaluation_block);
  for (const auto& e : exps)
    out << e.quantity << ": slope " << e.slope << " +- " << e.slope_stderr << " (target " << e.target << ")"
        << (e.reliable ? "" : " [unreliable]") << '\n';
  return kExitPass;
}

int cmd_verify(const ExperimentConfig& cfg, int threads, Run& run, std::ostream& out) {
  const auto v = acceptance::verify(cfg.seed, threads, &out);
  for (const auto& c : v.criteria)
    for (const auto& [name, table] : c.tables) run.dir().write_table(name, table);
  run.dir().write_table("acceptance", acceptance::summary_table(v.criteria));
  run.dir().add_plot(plot("c6_psi_sums", "psi_sums", "sum of psi^2 against n", "n_or_T", {"sum_psi_sq"}, "H", true,
                          true));
  run.dir().add_plot(plot("c5_lemma_integral", "lemma_integral", "integral ratio against u", "u", {"ratio"}, "beta",
                          true, false));
  run.dir().add_plot(plot("c7_tails", "occupation_tails", "occupation tails (Gaussian-oracle thresholds)", "r",
                          {"estimate"}, "H", false, true));
  run.dir().manifest()["verify_wall_time_s"] = v.wall_seconds;
  const std::size_t passed =
      static_cast<std::size_t>(std::count_if(v.criteria.begin(), v.criteria.end(), [](const auto& c) { return c.pass; }));
  out << passed << "/" << v.criteria.size() << " criteria passed\n";
  return v.pass() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and verification laboratory for fBm-driven SDEs", "fbmlab"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Configuration file (key = value lines)");
  app.add_option("--seed", o.seed, "Master seed (overrides the config)");
  app.add_option("--threads", o.threads, "OpenMP threads (overrides FBM_LAB_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Run directory")->capture_default_str();
  app.add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag_callback("--version", [&] { throw CLI::CallForVersion(kVersion, 0); }, "Print the version");

  const char* const names[][2] = {
      {"sample", "Sample fBm paths"},
      {"integrate", "Sample fBm paths and integrate the SDE"},
      {"bounds", "Tabulate psi_{n,k}, psi'_{T,k} and their squared sums"},
      {"diagnose", "G-process Hoelder ratios and sup-norm tails/moments of Brownian motion"},
      {"experiment", "Occupation-average tails and scaling exponents"},
      {"verify", "Run the acceptance suite"},
      {"report", "Redraw plots and summary.md of an existing run directory"}};
  for (const auto& [name, help] : names) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "report") {
      report::regenerate(o.out);
      out << "regenerated plots and summary.md in " << o.out << '\n';
      return kExitPass;
    }
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    cfg.validate();
    const int threads = o.threads ? *o.threads : par::threads_from_env(par::threads());
    par::set_threads(threads);

    std::ostringstream cmdline;
    for (int i = 0; i < argc; ++i) cmdline << (i ? " " : "") << argv[i];
    Run run(cmdline.str(), o, threads, cfg);
    int code = kExitPass;
    if (command == "sample") code = cmd_paths(false, cfg, run, out);
    else if (command == "integrate") code = cmd_paths(true, cfg, run, out);
    else if (command == "bounds") code = cmd_bounds(cfg, run, out);
    else if (command == "diagnose") code = cmd_diagnose(cfg, run, out);
    else if (command == "experiment") code = cmd_experiment(cfg, run, out);
    else if (command == "verify") code = cmd_verify(cfg, threads, run, out);
    run.finish();
    return code;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
}

}  // namespace fbmlab
