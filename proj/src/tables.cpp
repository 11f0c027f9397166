#include "fbmlab/tables.hpp"

#include <string>

namespace fbmlab::tables {

using report::cell;
using report::Table;

Table path(const SamplePath& p) {
  std::vector<std::string> cols{"t"};
  for (std::size_t c = 0; c < p.dim(); ++c) cols.push_back("comp_" + std::to_string(c));
  Table t(cols);
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::vector<std::string> row{cell(p.grid().at(k))};
    for (std::size_t c = 0; c < p.dim(); ++c) row.push_back(cell(p(k, c)));
    t.add_row(std::move(row));
  }
  return t;
}

Table tails(const std::vector<occupation::TailRow>& rows) {
  Table t({"H", "n_or_T", "delta", "r", "estimate", "stderr", "envelope", "censored"});
  for (const auto& r : rows)
    t.add_row({cell(r.h), cell(r.horizon), cell(r.delta), cell(r.r), cell(r.estimate.value),
               cell(r.estimate.std_error), cell(r.envelope), cell(r.censored)});
  return t;
}

Table tail_details(const std::vector<occupation::TailRow>& rows) {
  Table t({"H", "n_or_T", "r", "exceed", "replicas", "upper_bound_95", "r_sigma", "oracle_sd", "oracle_tail"});
  for (const auto& r : rows)
    t.add_row({cell(r.h), cell(r.horizon), cell(r.r), cell(r.exceed), cell(r.estimate.replicas),
               cell(r.upper_bound), cell(r.r_sigma), cell(r.oracle_sd), cell(r.oracle_tail)});
  return t;
}

Table statistics(const occupation::StatisticSample& s) {
  std::vector<std::string> cols{"stream_id"};
  for (double h : s.horizons) cols.push_back("h_" + cell(h));
  Table t(cols);
  const std::size_t n = s.centered.empty() ? 0 : s.centered.front().size();
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string> row{cell(static_cast<std::size_t>(s.evaluation_block.first + r))};
    for (const auto& col : s.centered) row.push_back(cell(col[r]));
    t.add_row(std::move(row));
  }
  return t;
}

Table exponents(const std::vector<occupation::ExponentRow>& rows) {
  Table t({"H", "quantity", "slope", "slope_stderr", "target"});
  for (const auto& r : rows)
    t.add_row({cell(r.h), r.quantity + (r.reliable ? "" : " [unreliable]"), cell(r.slope), cell(r.slope_stderr),
               cell(r.target)});
  return t;
}

Table bounds(const std::vector<bounds::BoundProfile>& profiles) {
  Table t({"H", "n_or_T", "k", "psi", "psi_sq_cumsum", "growth_exponent"});
  for (const auto& p : profiles)
    for (std::size_t k = 0; k < p.psi.size(); ++k)
      t.add_row({cell(p.hurst.value()), cell(p.horizon), cell(k + 1), cell(p.psi[k]), cell(p.psi_sq_cumsum[k]),
                 cell(p.growth_exponent)});
  return t;
}

Table holder(const diag::HolderReport& rep) {
  Table t({"v", "v_prime", "k", "H", "second_moment", "bound_ratio"});
  for (const auto& r : rep.rows)
    t.add_row({cell(r.v), cell(r.v_prime), cell(r.k), cell(rep.h), cell(r.second_moment), cell(r.ratio)});
  return t;
}

Table sup_norm(const std::vector<diag::SupTail>& tails, const std::vector<diag::SupMoment>& moments) {
  Table t({"x", "p", "estimate", "stderr", "comparator"});
  for (const auto& s : tails)
    t.add_row({cell(s.x), "", cell(s.two_sided.value), cell(s.two_sided.std_error), cell(s.sub_gaussian_bound)});
  for (const auto& m : moments)
    t.add_row({"", std::to_string(m.p), cell(m.estimate.value), cell(m.estimate.std_error), cell(m.comparator)});
  return t;
}

Table domination(const occupation::DominationReport& rep) {
  Table t({"H", "n", "z", "r", "calibration_tail", "evaluation_tail", "evaluation_lower", "envelope", "calibrated_c",
           "dominated"});
  for (const auto& r : rep.rows)
    t.add_row({cell(rep.h), cell(r.horizon), cell(r.z), cell(r.r), cell(r.calibration_tail), cell(r.evaluation_tail),
               cell(r.evaluation_lower), cell(r.envelope), cell(rep.calibrated_c), cell(r.dominated)});
  return t;
}

}  // namespace fbmlab::tables
