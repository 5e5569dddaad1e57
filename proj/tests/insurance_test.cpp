#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mbcp/approximants.hpp"
#include "mbcp/errors.hpp"
#include "mbcp/insurance.hpp"

using namespace mbcp;

namespace {

Portfolio three_groups() { return Portfolio{{{1, 100, 0.2, 0.01}, {2, 200, 0.3, 0.005}, {5, 50, 0.1, 0.02}}}; }

double first_moment(const LatticeMeasure& m) {
  double s = 0.0;
  for (std::int64_t k = m.offset(); k <= m.last(); ++k) s += static_cast<double>(k) * m[k];
  return s;
}

}  // namespace

TEST(RiskGroup, Validation) {
  EXPECT_NO_THROW((RiskGroup{1, 10, 0.3, 0.1}.validate()));
  EXPECT_THROW((RiskGroup{0, 10, 0.3, 0.1}.validate()), DomainError);
  EXPECT_THROW((RiskGroup{1, 0, 0.3, 0.1}.validate()), DomainError);
  EXPECT_THROW((RiskGroup{1, 10, 0.5, 0.1}.validate()), DomainError);
  EXPECT_THROW((RiskGroup{1, 10, 0.3, 1.0}.validate()), DomainError);
  EXPECT_THROW(Portfolio{}.validate(), DomainError);
  const auto c = RiskGroup{3, 40, 0.2, 0.05}.chain();
  EXPECT_EQ(c.p0, 0.0);
  EXPECT_EQ(c.n, 40);
}

TEST(AggregateExact, SingleGroupIsMarkovBinomial) {
  const Portfolio pf{{{1, 60, 0.3, 0.04}}};
  EXPECT_LE(norm(aggregate_exact(pf) - exact_dp({0.3, 0.04, 0.0, 60}), NormKind::total_variation), 1e-15);
}

TEST(AggregateExact, TwoGroupsSupportAndMass) {
  const Portfolio pf{{{1, 30, 0.2, 0.1}, {2, 20, 0.4, 0.05}}};
  const auto m = aggregate_exact(pf);
  EXPECT_NEAR(m.total_mass(), 1.0, 1e-11);
  EXPECT_GE(m.offset(), 0);
  EXPECT_LE(m.last(), 30 + 2 * 20);
  for (double c : m.coeffs()) EXPECT_GE(c, 0.0);
}

TEST(AggregateExact, MeanIsSumOfGroupMeans) {
  const auto pf = three_groups();
  double mean = 0.0;
  for (const auto& g : pf.groups) mean += static_cast<double>(g.claim_size) * mean_formula(g.chain());
  EXPECT_NEAR(first_moment(aggregate_exact(pf)), mean, 1e-9);
}

TEST(AggregateCp, SingleGroupIsFirstOrderApproximant) {
  const Portfolio pf{{{1, 150, 0.25, 0.02}}};
  const auto cp = aggregate_cp(pf);
  EXPECT_LE(norm(cp - build(ApproximantId::cp_first, {0.25, 0.02, 0.0, 150}), NormKind::total_variation), 1e-11);
}

TEST(AggregateCp, CharFnMatchesClosedForm) {
  const auto pf = three_groups();
  const auto cp = aggregate_cp(pf);
  EXPECT_NEAR(std::abs(char_fn(cp, 0.0) - 1.0), 0.0, 1e-12);
  for (double t : {0.0, 0.1, 0.5, 1.0}) {
    std::complex<double> exponent = 0.0;
    for (const auto& g : pf.groups) {
      const double q = 1.0 - g.p;
      const auto e = std::polar(1.0, t * static_cast<double>(g.claim_size));
      exponent += static_cast<double>(g.group_size) * q * g.q_bar * (e - 1.0) / ((q + g.q_bar) * (1.0 - g.p * e));
    }
    const auto oracle = std::exp(exponent);
    EXPECT_LT(std::abs(char_fn(cp, t) - oracle), 1e-9);
    EXPECT_LT(std::abs(aggregate_cp_char_fn(pf, t) - oracle), 1e-14);
  }
}

TEST(CpDistance, DegeneratePortfolio) {
  const Portfolio pf{{{1, 50, 0.2, 1e-9}, {3, 20, 0.1, 1e-9}}};
  EXPECT_LT(cp_distance_report(pf).distance, 1e-6);
}

TEST(CpDistance, ThreeGroupExample) {
  const auto r = cp_distance_report(three_groups());
  EXPECT_GT(r.distance, 0.0);
  EXPECT_NEAR(r.bound_sum, cp_bound_sum(three_groups()), 0.0);
  EXPECT_LE(r.distance / r.bound_sum, 10.0);
}

TEST(CpDistance, SingleGroupReducesToFirstOrderDistance) {
  const Portfolio pf{{{1, 300, 0.3, 0.01}}};
  const MBParams prm{0.3, 0.01, 0.0, 300};
  const double direct = norm(exact_dp(prm) - build(ApproximantId::cp_first, prm), NormKind::total_variation);
  EXPECT_NEAR(cp_distance_report(pf).distance, direct, 1e-11);
}

TEST(CpDistance, InvariantUnderCommonScaling) {
  const auto pf = three_groups();
  const double base = cp_distance_report(pf).distance;
  for (std::int64_t c : {2, 3}) {
    auto scaled = pf;
    for (auto& g : scaled.groups) g.claim_size *= c;
    EXPECT_NEAR(cp_distance_report(scaled).distance, base, 1e-12);
  }
}

TEST(CpDistance, RatioStaysBoundedAsGroupGrows) {
  for (std::int64_t n : {100, 400, 1600, 6400}) {
    Portfolio pf{{{1, 100, 0.2, 0.01}, {2, n, 0.3, 0.005}}};
    const auto r = cp_distance_report(pf);
    EXPECT_LE(r.distance / r.bound_sum, 10.0) << "n=" << n;
  }
}

TEST(PortfolioCsv, RoundTrip) {
  const auto pf = three_groups();
  std::stringstream ss;
  write_portfolio_csv(ss, pf);
  const auto back = read_portfolio_csv(ss);
  ASSERT_EQ(back.groups.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.groups[i].claim_size, pf.groups[i].claim_size);
    EXPECT_EQ(back.groups[i].group_size, pf.groups[i].group_size);
    EXPECT_EQ(back.groups[i].p, pf.groups[i].p);
    EXPECT_EQ(back.groups[i].q_bar, pf.groups[i].q_bar);
  }
}

TEST(PortfolioCsv, Errors) {
  auto line_of = [](const std::string& text) -> long {
    std::istringstream in(text);
    try {
      read_portfolio_csv(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_NE(line_of(""), -1);
  EXPECT_NE(line_of("a,n,p,q_bar\n"), -1);
  EXPECT_EQ(line_of("x,y\n1,2\n"), 1);
  EXPECT_EQ(line_of("a,n,p,q_bar\n1,10,0.2,0.01\n2,ten,0.2,0.01\n"), 3);
  EXPECT_EQ(line_of("a,n,p,q_bar\n1,10,0.2\n"), 2);
  EXPECT_EQ(line_of("a,n,p,q_bar\n1,10,0.7,0.01\n"), 2);
  std::istringstream empty("");
  try {
    read_portfolio_csv(empty);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("empty"), std::string::npos);
  }
}
