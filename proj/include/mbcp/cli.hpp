#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mbcp/approximants.hpp"
#include "mbcp/bounds.hpp"
#include "mbcp/insurance.hpp"
#include "mbcp/lattice_measure.hpp"
#include "mbcp/markov_binomial.hpp"

namespace mbcp::cli {

enum class Engine { automatic, dp, spectral, brute };

inline constexpr std::int64_t kAutoDpMaxN = 2000;

Engine parse_engine(std::string_view name);

// Exact Markov binomial law; `automatic` uses the DP up to n = 2000 and the
// spectral route above.
LatticeMeasure exact_law(const MBParams& params, Engine engine);

// The upper bound each approximant is measured against.
TheoremId theorem_for(ApproximantId id);

struct DistRow {
  MBParams params;
  ApproximantId approximant = ApproximantId::cp_first;
  NormKind norm_kind = NormKind::total_variation;
  double distance = 0.0;
  double rate = 0.0;
  double ratio = 0.0;
};

std::string dist_header();  // p,q_bar,p0,n,approximant,norm,distance,rate,ratio
std::string to_csv_row(const DistRow& row);

DistRow cmd_dist(const MBParams& params, ApproximantId id, NormKind kind,
                 Engine engine = Engine::automatic, double tol = kDefaultTol);

struct SweepSpec {
  ApproximantId approximant = ApproximantId::cp_first;
  NormKind norm_kind = NormKind::total_variation;
  std::vector<double> p;
  std::vector<double> q_bar;
  std::vector<double> p0;
  std::vector<std::int64_t> n;
  Engine engine = Engine::automatic;
  double tol = kDefaultTol;
  std::string out_path;

  // Nonempty grid whose every point is a valid chain.
  void validate() const;
};

// Rows in lexicographic (p, q_bar, p0, n) order; grid points are evaluated
// concurrently.
std::vector<DistRow> run_sweep(const SweepSpec& spec);

// Writes run_sweep as CSV to spec.out_path; IoError if it cannot be written.
void cmd_sweep(const SweepSpec& spec);

struct SharpRow {
  NormKind norm_kind = NormKind::total_variation;
  double distance = 0.0;
  double constant = 0.0;
  double ratio = 0.0;
};

struct SharpReport {
  MBParams params;
  SharpConstants constants;
  SharpRow rows[3];
  // A11 / (6 q_bar / sqrt(2 pi e)).
  double limit_ratio = 0.0;
};

SharpReport cmd_sharp(const MBParams& params, Engine engine = Engine::automatic,
                      double tol = kDefaultTol);
void print_sharp(std::ostream& out, const SharpReport& report);

struct InsuranceReport {
  double distance = 0.0;
  double bound_sum = 0.0;
  double ratio = 0.0;
};

InsuranceReport cmd_insurance(const Portfolio& pf, double tol = kDefaultTol);

// Smoothing, Gaussian-limit and eigen-decomposition norm ladders as CSV blocks.
void cmd_lemmas(std::ostream& out, const MBParams& params, double tol = kDefaultTol);

// Full command-line entry point. Exit codes: 0 success, 2 usage, 3 domain,
// 4 resource, 5 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mbcp::cli
