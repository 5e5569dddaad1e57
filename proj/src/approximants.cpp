#include "mbcp/approximants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbcp/csv.hpp"
#include "mbcp/errors.hpp"

namespace mbcp {

DerivedParams derive(const MBParams& params) {
  params.validate();
  const double p = params.p, q = params.q(), qb = params.q_bar, p0 = params.p0;
  const double s = q + qb;
  DerivedParams d;
  d.gamma1 = q * qb / s;
  d.gamma2 = -q * qb * qb / (s * s) * (p + q / s) - d.gamma1 * d.gamma1 / 2.0;
  d.gamma3_tilde = d.gamma1 / 3.0 +
                   (p * p * qb + p * q * (2.0 * qb - q) / s + 2.0 * qb * q * q / (s * s)) / (q * s) +
                   qb / s * (p + q / s);
  d.gamma3 = d.gamma1 * d.gamma1 * d.gamma3_tilde;
  d.lambda = static_cast<double>(params.n) - p0;
  d.kappa1 = d.gamma1 * ((qb - p) / s - p0);
  d.kappa2 = p0 * p * q / s;
  d.a1 = d.gamma1;
  d.a2 = d.gamma2 + d.a1 * d.a1 / 2.0;
  d.a3 = d.gamma3 + d.a1 * d.a2 - d.a1 * d.a1 * d.a1 / 3.0;
  d.c1 = std::log(30.0 / 19.0);
  return d;
}

LatticeMeasure geometric_G(double p, double eps) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("geometric parameter p must lie in (0,1)");
  if (!(eps > 0.0)) throw DomainError("tail tolerance must be positive");
  const double q = 1.0 - p;
  std::vector<double> c;
  // Mass beyond point K is p^K.
  double tail = 1.0;
  double mass = q;
  while (tail > eps) {
    c.push_back(mass);
    mass *= p;
    tail *= p;
  }
  return LatticeMeasure(1, std::move(c), tail);
}

std::string_view to_string(ApproximantId id) {
  switch (id) {
    case ApproximantId::cp_first:
      return "cp1";
    case ApproximantId::cp_compound_binomial:
      return "cpb";
    case ApproximantId::cp_second:
      return "cp2";
    case ApproximantId::scp_d2:
      return "scp2";
    case ApproximantId::scp_d2_corrected:
      return "scp2c";
    case ApproximantId::scp_d3:
      return "scp3";
  }
  return "?";
}

ApproximantId parse_approximant(std::string_view name) {
  for (auto id : kAllApproximants) {
    if (to_string(id) == name) return id;
  }
  std::string valid;
  for (auto id : kAllApproximants) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(id);
  }
  throw UsageError("unknown approximant '" + std::string(name) + "' (valid: " + valid + ")");
}

namespace {

struct Ingredients {
  DerivedParams d;
  LatticeMeasure Y;
  LatticeMeasure H;
};

// Tail error in G enters each exponent multiplied by its coefficient, which
// is at most of order n.
Ingredients ingredients(const MBParams& params, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  Ingredients in;
  in.d = derive(params);
  const double eps_g = tol / (8.0 * std::max<double>(1.0, static_cast<double>(params.n)));
  in.Y = geometric_G(params.p, eps_g) - LatticeMeasure::identity();
  in.H = LatticeMeasure::identity() + in.d.kappa2 * in.Y;
  return in;
}

LatticeMeasure correction(const LatticeMeasure& Y, int order, double coef) {
  LatticeMeasure pw = Y;
  for (int i = 1; i < order; ++i) pw = convolve(pw, Y);
  return LatticeMeasure::identity() + coef * pw;
}

// exp{ shift Y + s * sum_{i<=order} gamma_i Y^i }.
LatticeMeasure signed_exponential(const Ingredients& in, int order, double s, double shift, double tol) {
  const double gammas[3] = {in.d.gamma1, in.d.gamma2, in.d.gamma3};
  LatticeMeasure exponent = (shift + s * gammas[0]) * in.Y;
  LatticeMeasure pw = in.Y;
  for (int i = 2; i <= order; ++i) {
    pw = convolve(pw, in.Y);
    exponent = exponent + (s * gammas[i - 1]) * pw;
  }
  return exp_measure(exponent, tol);
}

}  // namespace

LatticeMeasure signed_cp_power(const MBParams& params, int order, double s, double tol) {
  if (order < 1 || order > 3) throw DomainError("D_j is defined for j = 1, 2, 3");
  const auto in = ingredients(params, tol);
  return signed_exponential(in, order, s, 0.0, tol / 2.0);
}

LatticeMeasure measure_H(const MBParams& params, double tol) { return ingredients(params, tol).H; }

LatticeMeasure build(ApproximantId id, const MBParams& params, double tol) {
  const auto in = ingredients(params, tol);
  const auto& d = in.d;
  const double n = static_cast<double>(params.n);
  const double stage = tol / 4.0;
  LatticeMeasure core;
  switch (id) {
    case ApproximantId::cp_first:
      core = exp_measure(d.lambda * d.gamma1 * in.Y, stage);
      break;
    case ApproximantId::cp_compound_binomial: {
      const LatticeMeasure h1 = LatticeMeasure::identity() + d.gamma1 * in.Y;
      core = power(h1, d.lambda, stage);
      break;
    }
    case ApproximantId::cp_second:
      core = convolve(exp_measure(d.lambda * d.gamma1 * in.Y, stage), correction(in.Y, 2, n * d.gamma2));
      break;
    case ApproximantId::scp_d2:
      core = signed_exponential(in, 2, n, d.kappa1, stage);
      break;
    case ApproximantId::scp_d2_corrected:
      core = convolve(signed_exponential(in, 2, n, d.kappa1, stage), correction(in.Y, 3, n * d.gamma3));
      break;
    case ApproximantId::scp_d3:
      core = signed_exponential(in, 3, n, d.kappa1, stage);
      break;
  }
  return truncate(convolve(in.H, core), stage);
}

LatticeMeasure inverse_H(const MBParams& params, double tol) {
  params.validate();
  if (!params.satisfies_cond1()) throw DomainError("inverse_H requires p <= 1/2 and q_bar <= 1/30");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const auto d = derive(params);
  const double q = params.q(), p = params.p;
  const double r = (1.0 - params.p0 * q / (q + params.q_bar)) / (1.0 - d.kappa2);
  // Tail of sum_j p^j/j |1 - r^j| beyond J is below p^{J+1}/(1-p).
  std::vector<double> c{0.0};
  double pj = 1.0, rj = 1.0, total = 0.0;
  for (int j = 1; pj * p / (1.0 - p) > tol / 16.0 || j == 1; ++j) {
    pj *= p;
    rj *= r;
    const double cj = pj / j * (1.0 - rj);
    c.push_back(-cj);
    total += cj;
  }
  c[0] = total;
  return exp_measure(LatticeMeasure(0, std::move(c)), tol / 2.0);
}

LatticeMeasure cp_form_of_power(double p, double alpha, double N, double tol) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1)");
  if (!(alpha > 0.0 && alpha <= p)) throw DomainError("alpha must lie in (0, p]");
  if (!(N > 0.0)) throw DomainError("N must be positive");
  const double rho = (p - alpha) / (1.0 - alpha);
  std::vector<double> c{0.0};
  double pj = 1.0, rj = 1.0, total = 0.0;
  for (int j = 1; N * pj * p / (1.0 - p) > tol / 16.0 || j == 1; ++j) {
    pj *= p;
    rj *= rho;
    const double cj = N * (pj - rj) / j;
    c.push_back(cj);
    total += cj;
  }
  c[0] = -total;
  return exp_measure(LatticeMeasure(0, std::move(c)), tol / 2.0);
}

double generalized_binomial(double x, int k) {
  if (k < 0) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (x - i) / (i + 1);
  return r;
}

std::vector<double> geometric_factorial_moments(std::span<const double> nu, double p, int m_max) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1)");
  if (m_max < 1 || nu.size() < static_cast<std::size_t>(m_max)) {
    throw DomainError("need at least m_max factorial moments");
  }
  const double q = 1.0 - p;
  std::vector<double> out(static_cast<std::size_t>(m_max));
  double m_fact = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    m_fact *= m;
    double acc = 0.0;
    double j_fact = 1.0;
    for (int j = 1; j <= m; ++j) {
      j_fact *= j;
      // (-p)^m (-q/p)^j = (-1)^{m+j} p^{m-j} q^j
      const double sign = ((m + j) % 2 == 0) ? 1.0 : -1.0;
      acc += nu[static_cast<std::size_t>(j - 1)] / j_fact * sign * std::pow(p, m - j) * std::pow(q, j) *
             generalized_binomial(m - 1, m - j);
    }
    out[static_cast<std::size_t>(m - 1)] = m_fact * acc;
  }
  return out;
}

}  // namespace mbcp
