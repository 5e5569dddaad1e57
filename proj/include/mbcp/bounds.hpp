#pragma once

#include <string>
#include <string_view>

#include "mbcp/lattice_measure.hpp"
#include "mbcp/markov_binomial.hpp"

namespace mbcp {

// Upper-bound statements whose right-hand sides can be evaluated.
// T1..T5 are the five approximation theorems, C1 and C2 the corollaries of
// the first-order compound Poisson bound.
enum class TheoremId { T1, T2, T3, T4, T5, C1, C2 };

std::string_view to_string(TheoremId id);
TheoremId parse_theorem(std::string_view name);

// Right-hand side of the theorem in the given norm, every absolute constant
// set to 1. Throws UsageError for pairs that are not stated.
double rate_value(TheoremId theorem, NormKind kind, const MBParams& params);

struct RateReport {
  TheoremId theorem = TheoremId::T1;
  NormKind norm_kind = NormKind::total_variation;
  MBParams params;
  double actual_distance = 0.0;
  double rate_expression_value = 0.0;
  double ratio = 0.0;
};

RateReport make_rate_report(TheoremId theorem, NormKind kind, const MBParams& params,
                            double actual_distance);
std::string rate_report_header();
// theorem,norm,p,q_bar,p0,n,actual,rate,ratio
std::string to_csv_row(const RateReport& report);

struct SharpConstants {
  double a11 = 0.0;  // total variation
  double a12 = 0.0;  // local
  double a13 = 0.0;  // Wasserstein
  // p <= 1/4, q_bar <= 1/30 and n q_bar >= 1.
  bool hypotheses_hold = false;
};

SharpConstants sharp_constants(const MBParams& params);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

// ||Y^k e^{tY}|| against 3/(te) for k = 2 and (2k/(te))^{k/2} otherwise,
// with Y = G - I.
InequalityCheck smoothing_check(int k, double t, double p, double tol = kDefaultTol);

// ||Y^k e^{tY}||_inf; requires p <= 1/2.
double smoothing_local(int k, double t, double p, double tol = kDefaultTol);

struct GaussianNorms {
  double l1 = 0.0;
  double sup = 0.0;
};

// L1 and sup norms of the k-th derivative of the standard normal density,
// k <= 6, by adaptive quadrature between sign changes.
GaussianNorms gaussian_derivative_norms(int k);

struct SharpcCheck {
  double lhs = 0.0;
  double limit_term = 0.0;
  double residual = 0.0;
};

// Norm of (I1 - I)^k e^{t(I1 - I)} against its Gaussian limit term.
SharpcCheck sharpc_check(int k, double t, NormKind kind = NormKind::total_variation,
                         double tol = kDefaultTol);

enum class FourierWeight { gaussian, t_gaussian };

// | int_{-40}^{40} w(t) m^(t/b) e^{-i t alpha} dt | with w(t) = e^{-t^2/2}
// or t e^{-t^2/2}.
double lower_bound_functional(const LatticeMeasure& m, double b, double alpha, FourierWeight weight);

struct CharfResiduals {
  double r1 = 0.0;        // |exp{n k1 (Y^(t) - it/q)} - 1|
  double r2 = 0.0;        // |D2^n(t) exp{-itn g1/q} - 1|
  double d2n_abs = 0.0;   // |D2^n(t)|
};

// Builds G and D2^n once and evaluates the residuals at many t.
class CharfResidualEvaluator {
 public:
  explicit CharfResidualEvaluator(const MBParams& params, double tol = kDefaultTol);
  CharfResiduals at(double t) const;

 private:
  MBParams params_;
  double kappa1_ = 0.0;
  double gamma1_ = 0.0;
  LatticeMeasure g_;
  LatticeMeasure d2n_;
};

CharfResiduals charf_residual(const MBParams& params, double t);

struct Lemma4Check {
  double lambda2_norm = 0.0;             // bound 19/30
  double lambda1_minus_identity = 0.0;   // bound 0.1
  double w2_norm = 0.0;                  // bound 7
};

Lemma4Check lemma4_check(const MBParams& params);

}  // namespace mbcp
