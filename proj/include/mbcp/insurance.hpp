#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mbcp/lattice_measure.hpp"
#include "mbcp/markov_binomial.hpp"

namespace mbcp {

// A homogeneous group of Markov-dependent two-point risks, each producing a
// claim of size `claim_size` or nothing. The first risk claims with
// probability q_bar, i.e. the chain is entered from the no-claim state.
struct RiskGroup {
  std::int64_t claim_size = 1;
  std::int64_t group_size = 1;
  double p = 0.0;
  double q_bar = 0.0;

  // Throws DomainError unless claim_size, group_size >= 1, p in (0, 1/2)
  // and q_bar in (0,1).
  void validate() const;
  MBParams chain() const { return MBParams{p, q_bar, 0.0, group_size}; }
};

// Mutually independent groups.
struct Portfolio {
  std::vector<RiskGroup> groups;

  void validate() const;
};

// CSV with header "a,n,p,q_bar", one group per row.
Portfolio read_portfolio_csv(std::istream& in);
void write_portfolio_csv(std::ostream& out, const Portfolio& pf);

LatticeMeasure aggregate_exact(const Portfolio& pf);

// exp{ sum_m n_m q_m q_bar_m / (q_m + q_bar_m) * scale(G_m - I, a_m) }.
LatticeMeasure aggregate_cp(const Portfolio& pf, double tol = kDefaultTol);

std::complex<double> aggregate_cp_char_fn(const Portfolio& pf, double t);

struct CpDistanceReport {
  double distance = 0.0;
  double bound_sum = 0.0;
};

CpDistanceReport cp_distance_report(const Portfolio& pf, double tol = kDefaultTol);

// Right-hand side of the group-wise compound Poisson estimate with C = 1.
double cp_bound_sum(const Portfolio& pf);

}  // namespace mbcp
