#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mbcp/lattice_measure.hpp"

namespace mbcp {

// Two-state chain xi_0, xi_1, ... with P(xi_0 = 1) = p0,
// P(xi_i = 1 | xi_{i-1} = 1) = p and P(xi_i = 1 | xi_{i-1} = 0) = q_bar.
// The Markov binomial law is the law of S_n = xi_1 + ... + xi_n.
struct MBParams {
  double p = 0.0;
  double q_bar = 0.0;
  double p0 = 0.0;
  std::int64_t n = 1;

  double q() const noexcept { return 1.0 - p; }
  double p_bar() const noexcept { return 1.0 - q_bar; }

  // p <= 1/2 and q_bar <= 1/30.
  bool satisfies_cond1() const noexcept { return p <= 0.5 && q_bar <= 1.0 / 30.0; }

  // Throws DomainError unless p, q_bar in (0,1), p0 in [0,1], n >= 1.
  void validate() const;
};

inline constexpr std::int64_t kBruteForceMaxN = 20;

// Enumerates all 2^(n+1) trajectories of (xi_0, ..., xi_n).
LatticeMeasure brute_force(const MBParams& params);

// Forward recursion over (step, state, count); O(n^2).
LatticeMeasure exact_dp(const MBParams& params);

// Characteristic function of S_n through the marked transfer matrix
// [[p_bar, q_bar e^{it}], [q, p e^{it}]] raised to the n-th power.
std::complex<double> mb_char_fn(const MBParams& params, double t);

// Samples mb_char_fn on the smallest power-of-two grid with at least n+1
// points and inverts it; exact because the transform is a trigonometric
// polynomial of degree n.
LatticeMeasure exact_spectral(const MBParams& params);

// E S_n from the closed form q E S_n = n g1 + k1 + k2 - (k1 + k2)(p - q_bar)^n.
double mean_formula(const MBParams& params);

struct EigenComponents {
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  std::complex<double> w1;
  std::complex<double> w2;
};

inline constexpr int kBranchTrackingSteps = 4096;

// Transforms of the eigen-decomposition F_n = Lambda1^n W1 + Lambda2^n W2,
// with the square root of the discriminant continued from t = 0 (where
// Lambda1 = 1). Requires the chain to satisfy cond1.
EigenComponents eigen_components_hat(const MBParams& params, double t);

// Same components on a grid, continuing the branch along the grid itself
// outward from t = 0. Grid points must be sorted ascending.
std::vector<EigenComponents> eigen_components_on_grid(const MBParams& params,
                                                      std::span<const double> ts);

// Lambda1, Lambda2, W1, W2 as lattice measures, recovered by inverting their
// transforms on a grid of `grid_size` points (power of two). Coefficients in
// the upper half of the grid are read as negative lattice points.
struct EigenMeasures {
  LatticeMeasure lambda1;
  LatticeMeasure lambda2;
  LatticeMeasure w1;
  LatticeMeasure w2;
};
EigenMeasures eigen_component_measures(const MBParams& params, std::size_t grid_size = 4096);

}  // namespace mbcp
