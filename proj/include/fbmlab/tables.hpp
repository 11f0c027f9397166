#pragma once

#include <vector>

#include "fbmlab/bounds.hpp"
#include "fbmlab/gaussian_diagnostics.hpp"
#include "fbmlab/occupation.hpp"
#include "fbmlab/report.hpp"
#include "fbmlab/sample_path.hpp"

namespace fbmlab::tables {

/// t,comp_0,...
report::Table path(const SamplePath& p);
/// H,n_or_T,delta,r,estimate,stderr,envelope,censored
report::Table tails(const std::vector<occupation::TailRow>& rows);
/// H,n_or_T,r,exceed,replicas,upper_bound_95,r_sigma,oracle_sd,oracle_tail
report::Table tail_details(const std::vector<occupation::TailRow>& rows);
/// stream_id followed by one column per horizon.
report::Table statistics(const occupation::StatisticSample& s);
/// H,quantity,slope,slope_stderr,target
report::Table exponents(const std::vector<occupation::ExponentRow>& rows);
/// H,n_or_T,k,psi,psi_sq_cumsum,growth_exponent
report::Table bounds(const std::vector<bounds::BoundProfile>& profiles);
/// v,v_prime,k,H,second_moment,bound_ratio
report::Table holder(const diag::HolderReport& rep);
/// x,p,estimate,stderr,comparator; tail rows leave p empty, moment rows leave x empty.
report::Table sup_norm(const std::vector<diag::SupTail>& tails, const std::vector<diag::SupMoment>& moments);
/// H,n,z,r,calibration_tail,evaluation_tail,evaluation_lower,envelope,calibrated_c,dominated
report::Table domination(const occupation::DominationReport& rep);

}  // namespace fbmlab::tables
