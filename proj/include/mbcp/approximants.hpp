#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mbcp/lattice_measure.hpp"
#include "mbcp/markov_binomial.hpp"

namespace mbcp {

// Scalar characteristics of the chain used by every approximant.
struct DerivedParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double gamma3_tilde = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double lambda = 0.0;  // n - p0
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double c1 = 0.0;  // ln(30/19)
};

DerivedParams derive(const MBParams& params);

// Geometric law G on {1, 2, ...} with masses q p^{k-1}, tail mass beyond the
// kept window at most eps.
LatticeMeasure geometric_G(double p, double eps);

enum class ApproximantId {
  cp_first,              // H D1^lambda
  cp_compound_binomial,  // H H1^lambda
  cp_second,             // H D1^lambda (I + n g2 Y^2)
  scp_d2,                // H exp{k1 Y} D2^n
  scp_d2_corrected,      // H exp{k1 Y} D2^n (I + n g3 Y^3)
  scp_d3,                // H exp{k1 Y} D3^n
};

inline constexpr ApproximantId kAllApproximants[] = {
    ApproximantId::cp_first,  ApproximantId::cp_compound_binomial, ApproximantId::cp_second,
    ApproximantId::scp_d2,    ApproximantId::scp_d2_corrected,     ApproximantId::scp_d3};

// CLI names: cp1, cpb, cp2, scp2, scp2c, scp3.
std::string_view to_string(ApproximantId id);
ApproximantId parse_approximant(std::string_view name);

LatticeMeasure build(ApproximantId id, const MBParams& params, double tol = kDefaultTol);

// exp{ s * sum_{i<=order} gamma_i Y^i }, i.e. D_order^s.
LatticeMeasure signed_cp_power(const MBParams& params, int order, double s,
                               double tol = kDefaultTol);

// H = I + kappa2 Y.
LatticeMeasure measure_H(const MBParams& params, double tol = kDefaultTol);

// exp{ -sum_j p^j/j (1 - r^j) (I_j - I) } with
// r = (1 - p0 q/(q + q_bar)) / (1 - kappa2).
LatticeMeasure inverse_H(const MBParams& params, double tol = kDefaultTol);

// Explicit compound Poisson form of (I + alpha Y)^N for 0 < alpha <= p:
// exp{ -N ln(1 - alpha) (F - I) } with
// F{j} = -1/ln(1 - alpha) * (p^j - ((p - alpha)/(1 - alpha))^j) / j.
LatticeMeasure cp_form_of_power(double p, double alpha, double N, double tol = kDefaultTol);

// Geometric factorial moments nu~_1..nu~_{m_max} from ordinary factorial
// moments nu_1..nu_{m_max}.
std::vector<double> geometric_factorial_moments(std::span<const double> nu, double p, int m_max);

// x(x-1)...(x-k+1)/k!, with binom(x, 0) = 1.
double generalized_binomial(double x, int k);

}  // namespace mbcp
