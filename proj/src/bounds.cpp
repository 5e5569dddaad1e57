#include "mbcp/bounds.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mbcp/approximants.hpp"
#include "mbcp/csv.hpp"
#include "mbcp/errors.hpp"

namespace mbcp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1:
      return "T1";
    case TheoremId::T2:
      return "T2";
    case TheoremId::T3:
      return "T3";
    case TheoremId::T4:
      return "T4";
    case TheoremId::T5:
      return "T5";
    case TheoremId::C1:
      return "C1";
    case TheoremId::C2:
      return "C2";
  }
  return "?";
}

TheoremId parse_theorem(std::string_view name) {
  for (auto id : {TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::T5,
                  TheoremId::C1, TheoremId::C2}) {
    if (to_string(id) == name) return id;
  }
  throw UsageError("unknown theorem '" + std::string(name) + "' (valid: T1..T5, C1, C2)");
}

double rate_value(TheoremId theorem, NormKind kind, const MBParams& params) {
  params.validate();
  const double p = params.p, qb = params.q_bar;
  const double n = static_cast<double>(params.n);
  const double nq = n * qb;
  const double s = p + qb;
  const double ex = s * std::exp(-std::log(30.0 / 19.0) * n);
  switch (theorem) {
    case TheoremId::T1:
      switch (kind) {
        case NormKind::total_variation:
          return qb * s * std::min(1.0, 1.0 / std::sqrt(nq)) + std::min(qb, nq * qb) + ex;
        case NormKind::local:
          return qb * s * std::min(1.0, 1.0 / nq) + std::min(std::sqrt(qb / n), nq * qb) + ex;
        case NormKind::wasserstein:
          return qb * s + std::min(qb * std::sqrt(nq), nq * qb) + ex;
      }
      break;
    case TheoremId::T2:
      switch (kind) {
        case NormKind::total_variation:
          return qb * qb + p * qb * std::min(1.0, 1.0 / std::sqrt(nq)) + ex;
        case NormKind::local:
          return qb * qb * std::min(1.0, 1.0 / std::sqrt(nq)) + p * qb * std::min(1.0, 1.0 / nq) + ex;
        case NormKind::wasserstein:
          return qb * qb * std::max(1.0, std::sqrt(nq)) + p * qb + ex;
      }
      break;
    case TheoremId::T3:
      switch (kind) {
        case NormKind::total_variation:
          return s * std::min(qb, std::sqrt(qb / n)) + ex;
        case NormKind::local:
          return s * std::min(qb, 1.0 / n) + ex;
        case NormKind::wasserstein:
          return s * qb + ex;
      }
      break;
    case TheoremId::T4:
    case TheoremId::T5:
      switch (kind) {
        case NormKind::total_variation:
          return s * std::min(qb, 1.0 / n) + ex;
        case NormKind::local:
          return s * std::min(qb, 1.0 / (n * std::sqrt(nq))) + ex;
        case NormKind::wasserstein:
          return s * std::min(qb, std::sqrt(qb / n)) + ex;
      }
      break;
    case TheoremId::C1:
      switch (kind) {
        case NormKind::total_variation:
          return qb;
        case NormKind::local:
          return std::sqrt(qb / n);
        case NormKind::wasserstein:
          return qb * std::sqrt(nq);
      }
      break;
    case TheoremId::C2:
      if (kind == NormKind::total_variation) return qb + p * std::exp(-std::log(30.0 / 19.0) * n);
      break;
  }
  throw UsageError(std::string("no ") + to_string(kind) + " bound stated for " +
                   std::string(to_string(theorem)));
}

RateReport make_rate_report(TheoremId theorem, NormKind kind, const MBParams& params,
                            double actual_distance) {
  RateReport r;
  r.theorem = theorem;
  r.norm_kind = kind;
  r.params = params;
  r.actual_distance = actual_distance;
  r.rate_expression_value = rate_value(theorem, kind, params);
  r.ratio = actual_distance / r.rate_expression_value;
  return r;
}

std::string rate_report_header() { return "theorem,norm,p,q_bar,p0,n,actual,rate,ratio"; }

std::string to_csv_row(const RateReport& r) {
  std::string row;
  row += to_string(r.theorem);
  row += ',';
  row += to_string(r.norm_kind);
  for (double v : {r.params.p, r.params.q_bar, r.params.p0}) {
    row += ',';
    row += format_double(v);
  }
  row += ',' + std::to_string(r.params.n);
  for (double v : {r.actual_distance, r.rate_expression_value, r.ratio}) {
    row += ',';
    row += format_double(v);
  }
  return row;
}

SharpConstants sharp_constants(const MBParams& params) {
  const auto d = derive(params);
  const double q = params.q();
  const double n = static_cast<double>(params.n);
  const double g2 = std::abs(d.gamma2);
  SharpConstants c;
  c.a11 = 4.0 * g2 / (d.gamma1 * q * std::sqrt(2.0 * kPi * kE));
  c.a12 = g2 / (d.gamma1 * std::sqrt(d.gamma1) * std::sqrt(2.0 * kPi * n * q));
  c.a13 = g2 * std::sqrt(2.0 * n) / (q * std::sqrt(d.gamma1 * kPi * q));
  c.hypotheses_hold = params.p <= 0.25 && params.q_bar <= 1.0 / 30.0 && n * params.q_bar >= 1.0;
  return c;
}

namespace {

LatticeMeasure smoothing_measure(int k, double t, double p, double tol) {
  if (k < 0) throw DomainError("k must be nonnegative");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const LatticeMeasure Y = geometric_G(p, tol / (8.0 * std::max(1.0, t))) - LatticeMeasure::identity();
  LatticeMeasure m = exp_measure(t * Y, tol / 2.0);
  for (int i = 0; i < k; ++i) m = convolve(m, Y);
  return m;
}

// Probabilists' Hermite polynomial He_k.
double hermite(int k, double x) {
  if (k == 0) return 1.0;
  double h0 = 1.0, h1 = x;
  for (int j = 1; j < k; ++j) {
    const double h2 = x * h1 - j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// d^k/dx^k of the standard normal density.
double gaussian_derivative(int k, double x) {
  const double phi = std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi);
  return ((k % 2 == 0) ? 1.0 : -1.0) * hermite(k, x) * phi;
}

std::vector<double> hermite_roots(int k) {
  std::vector<double> roots;
  if (k == 0) return roots;
  // All roots of He_k (k <= 7) lie in (-5, 5) and are at least 0.5 apart.
  const double h = 1e-3;
  double a = -6.000123;
  double fa = hermite(k, a);
  while (a < 6.0) {
    const double b = a + h;
    const double fb = hermite(k, b);
    if ((fa < 0.0) != (fb < 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = hermite(k, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

}  // namespace

InequalityCheck smoothing_check(int k, double t, double p, double tol) {
  const auto m = smoothing_measure(k, t, p, tol);
  InequalityCheck c;
  c.lhs = norm(m, NormKind::total_variation);
  if (k == 0) {
    c.rhs = 1.0;
  } else if (k == 2) {
    c.rhs = 3.0 / (t * kE);
  } else {
    c.rhs = std::pow(2.0 * k / (t * kE), k / 2.0);
  }
  return c;
}

double smoothing_local(int k, double t, double p, double tol) {
  if (!(p <= 0.5)) throw DomainError("local smoothing bound requires p <= 1/2");
  return norm(smoothing_measure(k, t, p, tol), NormKind::local);
}

GaussianNorms gaussian_derivative_norms(int k) {
  if (k < 0 || k > 6) throw DomainError("gaussian_derivative_norms supports 0 <= k <= 6");
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [k](double x) { return std::abs(gaussian_derivative(k, x)); };
  std::vector<double> cuts{-std::numeric_limits<double>::infinity()};
  for (double r : hermite_roots(k)) cuts.push_back(r);
  cuts.push_back(std::numeric_limits<double>::infinity());
  GaussianNorms out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    out.l1 += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-14);
  }
  for (double r : hermite_roots(k + 1)) out.sup = std::max(out.sup, f(r));
  return out;
}

SharpcCheck sharpc_check(int k, double t, NormKind kind, double tol) {
  if (k < 0) throw DomainError("k must be nonnegative");
  if (!(t >= 1.0)) throw DomainError("sharpc_check requires t >= 1");
  if (kind == NormKind::wasserstein && k == 0) {
    throw DomainError("Wasserstein variant requires k >= 1");
  }
  const LatticeMeasure d = LatticeMeasure::point_mass(1) - LatticeMeasure::identity();
  LatticeMeasure m = exp_measure(t * d, tol);
  for (int i = 0; i < k; ++i) m = convolve(m, d);
  SharpcCheck c;
  c.lhs = norm(m, kind);
  switch (kind) {
    case NormKind::total_variation:
      c.limit_term = gaussian_derivative_norms(k).l1 / std::pow(t, k / 2.0);
      break;
    case NormKind::local:
      c.limit_term = gaussian_derivative_norms(k).sup / std::pow(t, (k + 1) / 2.0);
      break;
    case NormKind::wasserstein:
      c.limit_term = gaussian_derivative_norms(k - 1).l1 / std::pow(t, (k - 1) / 2.0);
      break;
  }
  c.residual = std::abs(c.lhs - c.limit_term);
  return c;
}

double lower_bound_functional(const LatticeMeasure& m, double b, double alpha, FourierWeight weight) {
  if (!(b > 1.0)) throw DomainError("lower_bound_functional requires b > 1");
  if (m.empty()) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double t) {
    const double w = std::exp(-t * t / 2.0) * (weight == FourierWeight::t_gaussian ? t : 1.0);
    return w * char_fn(m, t / b) * std::polar(1.0, -t * alpha);
  };
  // Split at the origin so symmetric cancellation is resolved on each half.
  const auto left = gauss_kronrod<double, 61>::integrate(f, -40.0, 0.0, 25, 1e-12);
  const auto right = gauss_kronrod<double, 61>::integrate(f, 0.0, 40.0, 25, 1e-12);
  return std::abs(left + right);
}

CharfResidualEvaluator::CharfResidualEvaluator(const MBParams& params, double tol) : params_(params) {
  params.validate();
  if (!params.satisfies_cond1()) {
    throw DomainError("characteristic-function residuals require p <= 1/2 and q_bar <= 1/30");
  }
  const auto d = derive(params);
  kappa1_ = d.kappa1;
  gamma1_ = d.gamma1;
  g_ = geometric_G(params.p, tol / 8.0);
  d2n_ = signed_cp_power(params, 2, static_cast<double>(params.n), tol);
}

CharfResiduals CharfResidualEvaluator::at(double t) const {
  if (std::abs(t) > kPi) throw DomainError("residuals are defined for |t| <= pi");
  using cplx = std::complex<double>;
  const double n = static_cast<double>(params_.n);
  const double q = params_.q();
  const cplx y_hat = char_fn(g_, t) - 1.0;
  const cplx i_unit(0.0, 1.0);
  const cplx d2n_hat = char_fn(d2n_, t);
  CharfResiduals r;
  r.r1 = std::abs(std::exp(n * kappa1_ * (y_hat - i_unit * t / q)) - 1.0);
  r.r2 = std::abs(d2n_hat * std::polar(1.0, -t * n * gamma1_ / q) - 1.0);
  r.d2n_abs = std::abs(d2n_hat);
  return r;
}

CharfResiduals charf_residual(const MBParams& params, double t) {
  return CharfResidualEvaluator(params).at(t);
}

Lemma4Check lemma4_check(const MBParams& params) {
  const auto em = eigen_component_measures(params);
  Lemma4Check c;
  c.lambda2_norm = norm(em.lambda2, NormKind::total_variation);
  c.lambda1_minus_identity = norm(em.lambda1 - LatticeMeasure::identity(), NormKind::total_variation);
  c.w2_norm = norm(em.w2, NormKind::total_variation);
  return c;
}

}  // namespace mbcp
