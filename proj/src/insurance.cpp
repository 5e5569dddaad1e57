#include "mbcp/insurance.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "mbcp/approximants.hpp"
#include "mbcp/csv.hpp"
#include "mbcp/errors.hpp"

namespace mbcp {

void RiskGroup::validate() const {
  if (claim_size < 1) throw DomainError("claim size must be a positive integer");
  if (group_size < 1) throw DomainError("group size must be a positive integer");
  if (!(p > 0.0 && p < 0.5)) throw DomainError("group persistence p must lie in (0, 1/2)");
  if (!(q_bar > 0.0 && q_bar < 1.0)) throw DomainError("group q_bar must lie in (0,1)");
}

void Portfolio::validate() const {
  if (groups.empty()) throw DomainError("portfolio has no risk groups");
  for (const auto& g : groups) g.validate();
}

Portfolio read_portfolio_csv(std::istream& in) {
  Portfolio pf;
  std::string line;
  long lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto fields = split_csv_line(body);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 4 || trim(fields[0]) != "a" || trim(fields[1]) != "n" ||
          trim(fields[2]) != "p" || trim(fields[3]) != "q_bar") {
        throw ParseError("expected header 'a,n,p,q_bar'", lineno);
      }
      continue;
    }
    if (fields.size() != 4) throw ParseError("expected 4 fields", lineno);
    RiskGroup g;
    auto parse = [&](std::string_view f, auto& out) {
      f = trim(f);
      const auto res = std::from_chars(f.data(), f.data() + f.size(), out);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
        throw ParseError("malformed field '" + std::string(f) + "'", lineno);
      }
    };
    parse(fields[0], g.claim_size);
    parse(fields[1], g.group_size);
    parse(fields[2], g.p);
    parse(fields[3], g.q_bar);
    try {
      g.validate();
    } catch (const DomainError& e) {
      throw ParseError(e.what(), lineno);
    }
    pf.groups.push_back(g);
  }
  if (!header_seen) throw ParseError("empty portfolio file", lineno);
  if (pf.groups.empty()) throw ParseError("portfolio file has no groups", lineno);
  return pf;
}

void write_portfolio_csv(std::ostream& out, const Portfolio& pf) {
  out << "a,n,p,q_bar\n";
  for (const auto& g : pf.groups) {
    out << g.claim_size << ',' << g.group_size << ',' << format_double(g.p) << ','
        << format_double(g.q_bar) << '\n';
  }
}

LatticeMeasure aggregate_exact(const Portfolio& pf) {
  pf.validate();
  LatticeMeasure law = LatticeMeasure::identity();
  for (const auto& g : pf.groups) law = convolve(law, scale_support(exact_dp(g.chain()), g.claim_size));
  return law;
}

namespace {
double poisson_rate(const RiskGroup& g) {
  const double q = 1.0 - g.p;
  return static_cast<double>(g.group_size) * q * g.q_bar / (q + g.q_bar);
}
}  // namespace

LatticeMeasure aggregate_cp(const Portfolio& pf, double tol) {
  pf.validate();
  double total_rate = 0.0;
  for (const auto& g : pf.groups) total_rate += poisson_rate(g);
  const double eps_g = tol / (8.0 * std::max(1.0, total_rate));
  LatticeMeasure exponent;
  for (const auto& g : pf.groups) {
    const LatticeMeasure y = geometric_G(g.p, eps_g) - LatticeMeasure::identity();
    exponent = exponent + poisson_rate(g) * scale_support(y, g.claim_size);
  }
  return exp_measure(exponent, tol / 2.0);
}

std::complex<double> aggregate_cp_char_fn(const Portfolio& pf, double t) {
  pf.validate();
  std::complex<double> acc = 0.0;
  for (const auto& g : pf.groups) {
    const double q = 1.0 - g.p;
    const auto e = std::polar(1.0, t * static_cast<double>(g.claim_size));
    acc += static_cast<double>(g.group_size) * q * g.q_bar * (e - 1.0) / ((q + g.q_bar) * (1.0 - g.p * e));
  }
  return std::exp(acc);
}

double cp_bound_sum(const Portfolio& pf) {
  pf.validate();
  const double c1 = std::log(30.0 / 19.0);
  double sum = 0.0;
  for (const auto& g : pf.groups) {
    const double n = static_cast<double>(g.group_size);
    const double nq = n * g.q_bar;
    sum += g.q_bar * (g.p + g.q_bar) * std::min(1.0, 1.0 / std::sqrt(nq)) +
           std::min(g.q_bar, nq * g.q_bar) + (g.p + g.q_bar) * std::exp(-c1 * n);
  }
  return sum;
}

CpDistanceReport cp_distance_report(const Portfolio& pf, double tol) {
  CpDistanceReport r;
  r.distance = norm(aggregate_exact(pf) - aggregate_cp(pf, tol), NormKind::total_variation);
  r.bound_sum = cp_bound_sum(pf);
  return r;
}

}  // namespace mbcp
