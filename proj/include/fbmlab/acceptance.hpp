#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fbmlab/parallel_kernels.hpp"
#include "fbmlab/report.hpp"

namespace fbmlab::acceptance {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  /// Run-dependent remarks such as timings; printed but kept out of the result tables.
  std::string note;
  /// Result tables, written as <name>.csv by `verify`.
  std::vector<std::pair<std::string, report::Table>> tables;
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  par::Exec exec = par::Exec::Parallel;
};

Criterion kernel_normalization(const SuiteOptions& o);
Criterion sampler_cross_validation(const SuiteOptions& o);
Criterion increment_exactness(const SuiteOptions& o);
Criterion reflection_check(const SuiteOptions& o);
Criterion lemma_integral_plateau(const SuiteOptions& o);
Criterion psi_growth_exponents(const SuiteOptions& o);
Criterion occupation_scaling(const SuiteOptions& o);
Criterion envelope_domination(const SuiteOptions& o);
Criterion gaussian_moment_sanity(const SuiteOptions& o);

/// Criteria 1 to 9 in order; each result line is echoed to `log` as it completes.
std::vector<Criterion> run_suite(const SuiteOptions& o, std::ostream* log = nullptr);

/// Every table of a suite run serialized as CSV text, keyed by table name.
std::vector<std::pair<std::string, std::string>> csv_bytes(const std::vector<Criterion>& suite);

/// Criterion 10 from two suite runs at different thread counts.
Criterion reproducibility(const std::vector<Criterion>& a, int threads_a, const std::vector<Criterion>& b,
                          int threads_b, double total_wall_seconds);

struct Verification {
  std::vector<Criterion> criteria;  ///< 1 to 10
  double wall_seconds = 0.0;
  bool pass() const;
};

/// Runs the suite at `threads` and again at the comparison count (8, or 1 when
/// `threads` is 8), then appends the reproducibility criterion. Progress lines go to `log`.
Verification verify(std::uint64_t seed, int threads, std::ostream* log = nullptr);

/// "PASS C<id> <name>: <detail>[; <note>]"
std::string format_line(const Criterion& c);
/// id,name,pass,detail
report::Table summary_table(const std::vector<Criterion>& criteria);

}  // namespace fbmlab::acceptance
