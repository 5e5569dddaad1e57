#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mbcp/approximants.hpp"
#include "mbcp/bounds.hpp"
#include "mbcp/errors.hpp"

using namespace mbcp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr NormKind kAllNorms[] = {NormKind::total_variation, NormKind::local, NormKind::wasserstein};
constexpr TheoremId kUpper[] = {TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::T5,
                                TheoremId::C1};

double phi(double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * kPi); }

// Probabilists' Hermite polynomial by the three-term recurrence.
double he(int k, double x) {
  double a = 1.0, b = x;
  if (k == 0) return a;
  for (int j = 1; j < k; ++j) {
    const double c = x * b - j * a;
    a = b;
    b = c;
  }
  return b;
}

// k-th derivative of the normal density.
double phi_k(int k, double x) { return (k % 2 ? -1.0 : 1.0) * he(k, x) * phi(x); }

}  // namespace

TEST(Rate, TheoremOneHandValue) {
  const MBParams prm{0.3, 0.01, 0.0, 100};
  const double expected = 0.01 * 0.31 * 1.0 + 0.01 + 0.31 * std::exp(-100 * std::log(30.0 / 19.0));
  EXPECT_NEAR(rate_value(TheoremId::T1, NormKind::total_variation, prm), expected, 1e-15);
  EXPECT_NEAR(rate_value(TheoremId::T1, NormKind::total_variation, prm), 0.0131, 1e-12);
}

TEST(Rate, CorollaryIsQBar) {
  EXPECT_EQ(rate_value(TheoremId::C1, NormKind::total_variation, {0.2, 0.01, 0.5, 500}), 0.01);
}

TEST(Rate, VanishesWithQBar) {
  for (auto th : kUpper) {
    for (auto kind : kAllNorms) {
      const double big = rate_value(th, kind, {0.2, 1e-2, 0.0, 80});
      const double small = rate_value(th, kind, {0.2, 1e-9, 0.0, 80});
      EXPECT_GT(big, 0.0);
      // Slowest decay is sqrt(q_bar); the e^{-C1 n} term is tiny at n = 80.
      EXPECT_LT(small, 1e-5) << to_string(th) << ' ' << to_string(kind);
      EXPECT_LT(small, 1e-2 * big) << to_string(th) << ' ' << to_string(kind);
    }
  }
}

TEST(Rate, UnstatedPairsAreUsageErrors) {
  EXPECT_NO_THROW(rate_value(TheoremId::C2, NormKind::total_variation, {0.2, 0.01, 0.0, 10}));
  EXPECT_THROW(rate_value(TheoremId::C2, NormKind::local, {0.2, 0.01, 0.0, 10}), UsageError);
  EXPECT_THROW(rate_value(TheoremId::C2, NormKind::wasserstein, {0.2, 0.01, 0.0, 10}), UsageError);
}

TEST(Rate, TheoremNames) {
  for (auto th : kUpper) EXPECT_EQ(parse_theorem(to_string(th)), th);
  EXPECT_EQ(parse_theorem("C2"), TheoremId::C2);
  EXPECT_THROW(parse_theorem("T9"), UsageError);
}

TEST(RateReport, CsvRow) {
  const auto r = make_rate_report(TheoremId::C1, NormKind::total_variation, {0.25, 0.5, 0.0, 4}, 0.125);
  EXPECT_EQ(rate_report_header(), "theorem,norm,p,q_bar,p0,n,actual,rate,ratio");
  EXPECT_EQ(to_csv_row(r), "C1,tv,0.25,0.5,0,4,0.125,0.5,0.25");
}

TEST(SharpConstants, IndependentEvaluation) {
  const MBParams prm{0.01, 0.005, 0.0, 20000};
  const long double p = 0.01L, q = 1 - p, qb = 0.005L, n = 20000;
  const long double g1 = q * qb / (q + qb);
  const long double g2 = -q * qb * qb / ((q + qb) * (q + qb)) * (p + q / (q + qb)) - g1 * g1 / 2;
  const long double pi = std::numbers::pi_v<long double>, e = std::numbers::e_v<long double>;
  const long double a11 = 4 * std::fabs(g2) / (g1 * q * std::sqrt(2 * pi * e));
  const long double a12 = std::fabs(g2) / (g1 * std::sqrt(g1) * std::sqrt(2 * pi * n * q));
  const long double a13 = std::fabs(g2) * std::sqrt(2 * n) / (q * std::sqrt(g1 * pi * q));
  const auto c = sharp_constants(prm);
  EXPECT_NEAR(c.a11, static_cast<double>(a11), 1e-14 * c.a11);
  EXPECT_NEAR(c.a12, static_cast<double>(a12), 1e-14 * c.a12);
  EXPECT_NEAR(c.a13, static_cast<double>(a13), 1e-14 * c.a13);
  EXPECT_TRUE(c.hypotheses_hold);
  EXPECT_FALSE(sharp_constants({0.3, 0.01, 0.0, 20000}).hypotheses_hold);
  EXPECT_FALSE(sharp_constants({0.1, 0.01, 0.0, 50}).hypotheses_hold);
}

TEST(SharpConstants, ScalingInN) {
  const auto a = sharp_constants({0.2, 0.02, 0.0, 100});
  const auto b = sharp_constants({0.2, 0.02, 0.0, 6400});
  EXPECT_NEAR(a.a11, b.a11, 1e-15);
  EXPECT_NEAR(a.a12 * 10.0, b.a12 * 80.0, 1e-12);
  EXPECT_NEAR(a.a13 / 10.0, b.a13 / 80.0, 1e-12);
}

TEST(SharpConstants, SmallParameterLimit) {
  const double qb = 1e-6;
  const auto c = sharp_constants({1e-6, qb, 0.0, 10000000});
  EXPECT_NEAR(c.a11 / qb, 6.0 / std::sqrt(2.0 * kPi * std::numbers::e), 1e-4);
}

TEST(Smoothing, ZerothPower) {
  const auto c = smoothing_check(0, 3.0, 0.4);
  EXPECT_NEAR(c.lhs, 1.0, 1e-12);
  EXPECT_EQ(c.rhs, 1.0);
}

TEST(Smoothing, StatedInstances) {
  const auto two = smoothing_check(2, 10.0, 0.3);
  EXPECT_NEAR(two.rhs, 3.0 / (10.0 * std::numbers::e), 1e-15);
  EXPECT_LE(two.lhs, two.rhs);
  EXPECT_LE(two.lhs, 0.1104);
  const auto three = smoothing_check(3, 25.0, 0.5);
  EXPECT_NEAR(three.rhs, std::pow(6.0 / (25.0 * std::numbers::e), 1.5), 1e-15);
  EXPECT_LE(three.lhs, three.rhs);
  EXPECT_LE(three.lhs, 0.0262);
}

TEST(Smoothing, LadderHolds) {
  for (double p : {0.1, 0.3, 0.5}) {
    for (int k = 1; k <= 4; ++k) {
      for (double t : {1.0, 5.0, 25.0, 125.0}) {
        const auto c = smoothing_check(k, t, p);
        EXPECT_LE(c.lhs, c.rhs) << "k=" << k << " t=" << t << " p=" << p;
      }
    }
  }
}

TEST(Smoothing, LocalVariant) {
  EXPECT_THROW(smoothing_local(1, 5.0, 0.6), DomainError);
  // Local norm never exceeds total variation.
  EXPECT_LE(smoothing_local(2, 5.0, 0.3), smoothing_check(2, 5.0, 0.3).lhs);
  EXPECT_THROW(smoothing_check(-1, 5.0, 0.3), DomainError);
  EXPECT_THROW(smoothing_check(1, 0.0, 0.3), DomainError);
}

TEST(GaussianNorms, KnownValues) {
  const auto g0 = gaussian_derivative_norms(0);
  EXPECT_NEAR(g0.l1, 1.0, 1e-10);
  EXPECT_NEAR(g0.sup, 1.0 / std::sqrt(2.0 * kPi), 1e-12);
  const auto g1 = gaussian_derivative_norms(1);
  EXPECT_NEAR(g1.l1, std::sqrt(2.0 / kPi), 1e-10);
  EXPECT_NEAR(g1.sup, phi(1.0), 1e-12);
  EXPECT_NEAR(gaussian_derivative_norms(2).l1, 4.0 * phi(1.0), 1e-10);
  EXPECT_NEAR(gaussian_derivative_norms(2).l1, 0.96788, 1e-5);
  EXPECT_THROW(gaussian_derivative_norms(7), DomainError);
}

TEST(GaussianNorms, AntiderivativeOracle) {
  // phi_k changes sign exactly at the roots of He_k, so its L1 norm is the
  // total variation of phi_{k-1} across those roots.
  for (int k = 1; k <= 6; ++k) {
    std::vector<double> roots;
    const double h = 1e-3;
    for (double x = -8.0; x < 8.0; x += h) {
      double a = x, b = x + h;
      if (he(k, a) == 0.0) {
        roots.push_back(a);
        continue;
      }
      if (he(k, a) * he(k, b) < 0.0) {
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (a + b);
          (he(k, a) * he(k, m) <= 0.0 ? b : a) = m;
        }
        roots.push_back(0.5 * (a + b));
      }
    }
    ASSERT_EQ(roots.size(), static_cast<std::size_t>(k));
    double l1 = std::abs(phi_k(k - 1, roots.front())) + std::abs(phi_k(k - 1, roots.back()));
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) l1 += std::abs(phi_k(k - 1, roots[i + 1]) - phi_k(k - 1, roots[i]));
    EXPECT_NEAR(gaussian_derivative_norms(k).l1, l1, 1e-10) << "k=" << k;
    double sup = 0.0;
    for (double x = -8.0; x <= 8.0; x += 1e-4) sup = std::max(sup, std::abs(phi_k(k, x)));
    EXPECT_NEAR(gaussian_derivative_norms(k).sup, sup, 1e-8) << "k=" << k;
  }
}

TEST(Sharpc, ZerothPowerIsExact) {
  const auto c = sharpc_check(0, 50.0);
  EXPECT_NEAR(c.lhs, 1.0, 1e-12);
  EXPECT_NEAR(c.limit_term, 1.0, 1e-10);
  EXPECT_LT(c.residual, 1e-10);
}

TEST(Sharpc, SecondPowerAtFourHundred) {
  const auto c = sharpc_check(2, 400.0);
  EXPECT_NEAR(c.lhs * 400.0 / gaussian_derivative_norms(2).l1, 1.0, 0.05);
}

TEST(Sharpc, ResidualScalingBounded) {
  for (auto kind : kAllNorms) {
    for (int k = (kind == NormKind::wasserstein ? 1 : 0); k <= 3; ++k) {
      double first = -1.0;
      for (double t : {100.0, 400.0, 1600.0}) {
        const auto c = sharpc_check(k, t, kind);
        double order = (k + 1) / 2.0;
        if (kind == NormKind::local) order = k / 2.0 + 1.0;
        if (kind == NormKind::wasserstein) order = k / 2.0;
        const double scaled = c.residual * std::pow(t, order);
        if (first < 0.0) first = std::max(scaled, 1e-8);
        EXPECT_LE(scaled, 2.0 * first) << to_string(kind) << " k=" << k << " t=" << t;
      }
    }
  }
}

TEST(Sharpc, Preconditions) {
  EXPECT_THROW(sharpc_check(1, 0.5), DomainError);
  EXPECT_THROW(sharpc_check(0, 10.0, NormKind::wasserstein), DomainError);
}

TEST(LowerBound, GaussianIntegrals) {
  EXPECT_EQ(lower_bound_functional(LatticeMeasure(), 2.0, 0.0, FourierWeight::gaussian), 0.0);
  EXPECT_NEAR(lower_bound_functional(LatticeMeasure::identity(), 2.0, 0.0, FourierWeight::gaussian),
              std::sqrt(2.0 * kPi), 1e-10);
  EXPECT_NEAR(lower_bound_functional(LatticeMeasure::identity(), 2.0, 0.0, FourierWeight::t_gaussian), 0.0, 1e-12);
  // A point mass at k is centred by alpha = k/b.
  EXPECT_NEAR(lower_bound_functional(LatticeMeasure::point_mass(6), 3.0, 2.0, FourierWeight::gaussian),
              std::sqrt(2.0 * kPi), 1e-10);
  // Off-centre: |int e^{-t^2/2} e^{it c}| = sqrt(2 pi) e^{-c^2/2}.
  EXPECT_NEAR(lower_bound_functional(LatticeMeasure::point_mass(3), 2.0, 0.0, FourierWeight::gaussian),
              std::sqrt(2.0 * kPi) * std::exp(-1.125), 1e-10);
  EXPECT_THROW(lower_bound_functional(LatticeMeasure::identity(), 1.0, 0.0, FourierWeight::gaussian), DomainError);
}

TEST(LowerBound, PositiveForFirstOrderDifference) {
  const MBParams prm{0.3, 0.01, 0.5, 800};
  const auto d = derive(prm);
  const double b = 4.0 * std::sqrt(prm.n * prm.q_bar);
  const auto diff = exact_dp(prm) - build(ApproximantId::cp_first, prm);
  EXPECT_GT(lower_bound_functional(diff, b, prm.n * d.gamma1 / prm.q() / b, FourierWeight::gaussian), 0.0);
}

TEST(CharfResidual, VanishAtZero) {
  const auto r = charf_residual({0.3, 0.01, 0.2, 200}, 0.0);
  EXPECT_NEAR(r.r1, 0.0, 1e-12);
  EXPECT_NEAR(r.r2, 0.0, 1e-10);
}

TEST(CharfResidual, BoundedOnGrid) {
  const MBParams prm{0.3, 0.01, 0.0, 200};
  const CharfResidualEvaluator ev(prm);
  double c1 = 0.0, c2 = 0.0;
  for (int j = 1; j <= 64; ++j) {
    const double t = kPi * j / 64.0;
    const auto r = ev.at(t);
    EXPECT_LE(r.d2n_abs, 1.0 + 1e-10);
    const double scale = prm.n * prm.q_bar * t * t;
    c1 = std::max(c1, r.r1 / scale);
    c2 = std::max(c2, r.r2 / scale);
  }
  EXPECT_LE(c1, 5.0);
  EXPECT_LE(c2, 5.0);
}

TEST(CharfResidual, Preconditions) {
  EXPECT_THROW(charf_residual({0.6, 0.01, 0.0, 20}, 0.1), DomainError);
  EXPECT_THROW(charf_residual({0.3, 0.01, 0.0, 20}, 3.2), DomainError);
}

TEST(Lemma4, EigenComponentNorms) {
  std::mt19937_64 g(301);
  std::uniform_real_distribution<double> up(0.01, 0.5), uq(0.001, 1.0 / 30.0), u0(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto c = lemma4_check({up(g), uq(g), u0(g), 10});
    EXPECT_LE(c.lambda2_norm, 19.0 / 30.0);
    EXPECT_LE(c.lambda1_minus_identity, 0.1);
    EXPECT_LE(c.w2_norm, 7.0);
  }
  const auto edge = lemma4_check({0.5, 1.0 / 30.0, 1.0, 10});
  EXPECT_LE(edge.lambda2_norm, 19.0 / 30.0);
  EXPECT_LE(edge.lambda1_minus_identity, 0.1);
  EXPECT_LE(edge.w2_norm, 7.0);
}
