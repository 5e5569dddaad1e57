#include "mbcp/lattice_measure.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "fft.hpp"
#include "mbcp/csv.hpp"
#include "mbcp/errors.hpp"
#include "mbcp/summation.hpp"

namespace mbcp {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::total_variation:
      return "tv";
    case NormKind::local:
      return "local";
    case NormKind::wasserstein:
      return "wasserstein";
  }
  return "?";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "tv" || name == "total_variation") return NormKind::total_variation;
  if (name == "local" || name == "sup") return NormKind::local;
  if (name == "wasserstein" || name == "w") return NormKind::wasserstein;
  throw UsageError("unknown norm '" + std::string(name) + "' (valid: tv, local, wasserstein)");
}

LatticeMeasure::LatticeMeasure(std::int64_t offset, std::vector<double> coeffs,
                               double truncation_budget)
    : offset_(offset), coeffs_(std::move(coeffs)), budget_(truncation_budget) {
  canonicalize();
}

LatticeMeasure LatticeMeasure::point_mass(std::int64_t k, double mass) {
  return LatticeMeasure(k, {mass});
}

void LatticeMeasure::canonicalize() {
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw DomainError("non-finite mass in lattice measure");
  }
  const auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double v) { return v != 0.0; });
  if (first == coeffs_.end()) {
    coeffs_.clear();
    offset_ = 0;
    return;
  }
  const auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), [](double v) { return v != 0.0; });
  coeffs_.erase(last.base(), coeffs_.end());
  const auto lead = first - coeffs_.begin();
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + lead);
  offset_ += lead;
}

double LatticeMeasure::operator[](std::int64_t k) const noexcept {
  if (coeffs_.empty() || k < offset_ || k > last()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k - offset_)];
}

double LatticeMeasure::total_mass() const {
  CompensatedSum s;
  for (double v : coeffs_) s += v;
  return s.value();
}

LatticeMeasure LatticeMeasure::with_budget(double budget) const {
  LatticeMeasure r = *this;
  r.budget_ = budget;
  return r;
}

LatticeMeasure operator+(const LatticeMeasure& a, const LatticeMeasure& b) {
  if (a.empty()) return b.with_budget(a.budget_ + b.budget_);
  if (b.empty()) return a.with_budget(a.budget_ + b.budget_);
  const std::int64_t lo = std::min(a.offset_, b.offset_);
  const std::int64_t hi = std::max(a.last(), b.last());
  std::vector<double> c(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[static_cast<std::size_t>(a.offset_ - lo) + i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[static_cast<std::size_t>(b.offset_ - lo) + i] += b.coeffs_[i];
  return LatticeMeasure(lo, std::move(c), a.budget_ + b.budget_);
}

LatticeMeasure operator-(const LatticeMeasure& a) {
  std::vector<double> c(a.coeffs_);
  for (auto& v : c) v = -v;
  return LatticeMeasure(a.offset_, std::move(c), a.budget_);
}

LatticeMeasure operator-(const LatticeMeasure& a, const LatticeMeasure& b) { return a + (-b); }

LatticeMeasure operator*(double s, const LatticeMeasure& a) {
  std::vector<double> c(a.coeffs_);
  for (auto& v : c) v *= s;
  return LatticeMeasure(a.offset_, std::move(c), a.budget_);
}

LatticeMeasure convolve(const LatticeMeasure& a, const LatticeMeasure& b,
                        const ConvolutionConfig& config) {
  const double budget = a.truncation_budget() + b.truncation_budget();
  if (a.empty() || b.empty()) return LatticeMeasure().with_budget(budget);
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t len = na + nb - 1;
  if (len > config.max_support) {
    throw ResourceError("convolution support of " + std::to_string(len) +
                        " points exceeds max_support = " + std::to_string(config.max_support));
  }
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  std::vector<double> c;
  if (na * nb <= config.fft_threshold) {
    c.assign(len, 0.0);
    for (std::size_t i = 0; i < na; ++i) {
      const double ai = ca[i];
      if (ai == 0.0) continue;
      double* dst = c.data() + i;
      for (std::size_t j = 0; j < nb; ++j) dst[j] += ai * cb[j];
    }
  } else {
    c = detail::fft_convolve(ca, cb);
    const double floor = 1e-15 * norm(a, NormKind::total_variation) * norm(b, NormKind::total_variation);
    for (auto& v : c) {
      if (std::abs(v) < floor) v = 0.0;
    }
  }
  return LatticeMeasure(a.offset() + b.offset(), std::move(c), budget);
}

double norm(const LatticeMeasure& m, NormKind kind) {
  const auto c = m.coeffs();
  switch (kind) {
    case NormKind::total_variation: {
      CompensatedSum s;
      for (double v : c) s += std::abs(v);
      return s.value();
    }
    case NormKind::local: {
      double best = 0.0;
      for (double v : c) best = std::max(best, std::abs(v));
      return best;
    }
    case NormKind::wasserstein: {
      if (std::abs(m.total_mass()) > kMassZeroTol) {
        throw DomainError("divergent Wasserstein norm: total mass " + format_double(m.total_mass()) +
                          " is not zero");
      }
      CompensatedSum partial;
      CompensatedSum acc;
      for (double v : c) {
        partial += v;
        acc += std::abs(partial.value());
      }
      return acc.value();
    }
  }
  return 0.0;
}

namespace {

void require_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be a positive real");
}

}  // namespace

LatticeMeasure exp_measure(const LatticeMeasure& m, double tol) {
  require_tol(tol);
  if (m.empty()) return LatticeMeasure::identity().with_budget(m.truncation_budget());

  const double nm = norm(m, NormKind::total_variation);
  int squarings = 0;
  while (std::ldexp(nm, -squarings) > 0.5) ++squarings;
  const double stage_tol = squarings == 0 ? tol : std::ldexp(tol, -(squarings + 2));
  const double term_eps = stage_tol / 64.0;

  const LatticeMeasure scaled = std::ldexp(1.0, -squarings) * m.with_budget(0.0);
  double discarded = 0.0;

  LatticeMeasure sum = LatticeMeasure::identity();
  LatticeMeasure term = LatticeMeasure::identity();
  for (int k = 1;; ++k) {
    term = (1.0 / k) * convolve(term, scaled);
    const auto trimmed = truncate(term, term_eps);
    discarded += trimmed.truncation_budget();
    term = trimmed.with_budget(0.0);
    sum = sum + term;
    if (norm(term, NormKind::total_variation) < stage_tol) break;
  }
  auto result = truncate(sum, stage_tol);
  discarded += result.truncation_budget();
  result = result.with_budget(0.0);
  for (int i = 0; i < squarings; ++i) {
    result = truncate(convolve(result, result), stage_tol);
    discarded += result.truncation_budget();
    result = result.with_budget(0.0);
  }
  return result.with_budget(m.truncation_budget() + discarded);
}

LatticeMeasure log_measure(const LatticeMeasure& m, double tol) {
  require_tol(tol);
  const LatticeMeasure d = m.with_budget(0.0) - LatticeMeasure::identity();
  const double nd = norm(d, NormKind::total_variation);
  if (!(nd < 1.0)) {
    throw DomainError("log series divergent: ||m - I|| = " + format_double(nd) + " >= 1");
  }
  if (d.empty()) return LatticeMeasure().with_budget(m.truncation_budget());

  constexpr int kMaxTerms = 100000;
  const double term_eps = tol / 1024.0;
  double discarded = 0.0;
  LatticeMeasure sum;
  LatticeMeasure pw = LatticeMeasure::identity();
  for (int k = 1;; ++k) {
    if (k > kMaxTerms) throw DomainError("log series failed to converge");
    pw = truncate(convolve(pw, d), term_eps);
    discarded += pw.truncation_budget();
    pw = pw.with_budget(0.0);
    const double coef = (k % 2 == 1 ? 1.0 : -1.0) / k;
    sum = sum + coef * pw;
    if (norm(pw, NormKind::total_variation) / k < tol) break;
  }
  return sum.with_budget(m.truncation_budget() + discarded);
}

LatticeMeasure power(const LatticeMeasure& m, double s, double tol) {
  require_tol(tol);
  if (!std::isfinite(s)) throw DomainError("power exponent must be finite");
  if (s >= 0.0 && s == std::floor(s) && s < 9.0e15) {
    auto e = static_cast<std::uint64_t>(s);
    LatticeMeasure result = LatticeMeasure::identity();
    LatticeMeasure base = m;
    // Intermediate products are only trimmed of mass that is negligible at
    // the requested tolerance, so low powers stay bit-exact.
    const double eps = tol / 256.0;
    while (e > 0) {
      if (e & 1U) result = truncate(convolve(result, base), eps);
      e >>= 1U;
      if (e > 0) base = truncate(convolve(base, base), eps);
    }
    return result;
  }
  const double scale = std::max(1.0, std::abs(s));
  const LatticeMeasure log_m = log_measure(m, tol / (4.0 * scale));
  return exp_measure(s * log_m, tol / 2.0);
}

std::complex<double> char_fn(const LatticeMeasure& m, double t) {
  if (m.empty()) return {0.0, 0.0};
  const auto c = m.coeffs();
  // Phasor recurrence, re-anchored periodically against drift.
  constexpr std::size_t kResync = 64;
  const std::complex<double> step = std::polar(1.0, t);
  CompensatedSum re;
  CompensatedSum im;
  std::complex<double> phase;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j % kResync == 0) {
      phase = std::polar(1.0, t * static_cast<double>(m.offset() + static_cast<std::int64_t>(j)));
    } else {
      phase *= step;
    }
    re += c[j] * phase.real();
    im += c[j] * phase.imag();
  }
  return {re.value(), im.value()};
}

LatticeMeasure truncate(const LatticeMeasure& m, double eps) {
  if (!(eps > 0.0)) throw DomainError("truncation eps must be positive");
  if (m.empty()) return m;
  const auto c = m.coeffs();
  std::size_t lo = 0;
  std::size_t hi = c.size();
  double dropped = 0.0;
  while (lo < hi) {
    const double left = std::abs(c[lo]);
    const double right = std::abs(c[hi - 1]);
    const bool take_left = left <= right;
    const double cand = take_left ? left : right;
    if (dropped + cand > eps) break;
    dropped += cand;
    if (take_left) {
      ++lo;
    } else {
      --hi;
    }
  }
  if (lo == 0 && hi == c.size()) return m;
  std::vector<double> kept(c.begin() + static_cast<std::ptrdiff_t>(lo),
                           c.begin() + static_cast<std::ptrdiff_t>(hi));
  return LatticeMeasure(m.offset() + static_cast<std::int64_t>(lo), std::move(kept),
                        m.truncation_budget() + dropped);
}

LatticeMeasure scale_support(const LatticeMeasure& m, std::int64_t a) {
  if (a < 1) throw DomainError("support scale must be a positive integer");
  if (a == 1 || m.empty()) return m;
  const auto c = m.coeffs();
  std::vector<double> out((c.size() - 1) * static_cast<std::size_t>(a) + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) out[i * static_cast<std::size_t>(a)] = c[i];
  return LatticeMeasure(m.offset() * a, std::move(out), m.truncation_budget());
}

void write_measure_csv(std::ostream& out, const LatticeMeasure& m) {
  out << "k,mass\n";
  const auto c = m.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    out << (m.offset() + static_cast<std::int64_t>(i)) << ',' << format_double(c[i]) << '\n';
  }
}

LatticeMeasure read_measure_csv(std::istream& in) {
  std::string line;
  long lineno = 0;
  bool header_seen = false;
  std::vector<std::pair<std::int64_t, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (body == "k,mass") continue;
    }
    const auto fields = split_csv_line(body);
    if (fields.size() != 2) throw ParseError("expected 'k,mass'", lineno);
    std::int64_t k = 0;
    double v = 0.0;
    const auto fk = trim(fields[0]);
    const auto fv = trim(fields[1]);
    if (std::from_chars(fk.data(), fk.data() + fk.size(), k).ec != std::errc{} ||
        std::from_chars(fv.data(), fv.data() + fv.size(), v).ec != std::errc{}) {
      throw ParseError("malformed number", lineno);
    }
    if (!rows.empty() && k <= rows.back().first) {
      throw ParseError("lattice points must be strictly increasing", lineno);
    }
    rows.emplace_back(k, v);
  }
  if (rows.empty()) return {};
  const std::int64_t lo = rows.front().first;
  std::vector<double> c(static_cast<std::size_t>(rows.back().first - lo + 1), 0.0);
  for (const auto& [k, v] : rows) c[static_cast<std::size_t>(k - lo)] = v;
  return LatticeMeasure(lo, std::move(c));
}

}  // namespace mbcp
