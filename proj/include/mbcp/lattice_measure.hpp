#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mbcp {

enum class NormKind { total_variation, local, wasserstein };

const char* to_string(NormKind kind);
NormKind parse_norm_kind(std::string_view name);

// Total masses below this are treated as zero when the Wasserstein norm is
// requested; beyond it the defining series diverges.
inline constexpr double kMassZeroTol = 1e-9;

inline constexpr double kDefaultTol = 1e-12;

struct ConvolutionConfig {
  // Longest support (in lattice points) a convolution may produce.
  std::size_t max_support = std::size_t{1} << 26;
  // Direct summation while size(a) * size(b) stays at or below this.
  std::size_t fft_threshold = std::size_t{4096} * 4096;
};

// Finite signed measure on the integer lattice, stored densely over the
// window [offset, offset + size). Always canonical: finite coefficients,
// nonzero first and last coefficient, and the zero measure is empty with
// offset 0.
//
// truncation_budget accumulates the absolute mass discarded by truncation
// while producing this value, including budgets carried in by operands.
class LatticeMeasure {
 public:
  LatticeMeasure() = default;
  LatticeMeasure(std::int64_t offset, std::vector<double> coeffs, double truncation_budget = 0.0);

  static LatticeMeasure point_mass(std::int64_t k, double mass = 1.0);
  static LatticeMeasure identity() { return point_mass(0); }

  std::int64_t offset() const noexcept { return offset_; }
  // Last support point; only meaningful when nonempty.
  std::int64_t last() const noexcept {
    return offset_ + static_cast<std::int64_t>(coeffs_.size()) - 1;
  }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }
  double truncation_budget() const noexcept { return budget_; }

  double operator[](std::int64_t k) const noexcept;
  double total_mass() const;

  LatticeMeasure with_budget(double budget) const;

  friend LatticeMeasure operator+(const LatticeMeasure& a, const LatticeMeasure& b);
  friend LatticeMeasure operator-(const LatticeMeasure& a, const LatticeMeasure& b);
  friend LatticeMeasure operator-(const LatticeMeasure& a);
  friend LatticeMeasure operator*(double s, const LatticeMeasure& a);
  friend LatticeMeasure operator*(const LatticeMeasure& a, double s) { return s * a; }

  friend bool operator==(const LatticeMeasure& a, const LatticeMeasure& b) {
    return a.offset_ == b.offset_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void canonicalize();

  std::int64_t offset_ = 0;
  std::vector<double> coeffs_;
  double budget_ = 0.0;
};

LatticeMeasure convolve(const LatticeMeasure& a, const LatticeMeasure& b,
                        const ConvolutionConfig& config = {});

double norm(const LatticeMeasure& m, NormKind kind);

// Exponential series sum_k m^k / k!. Large-norm inputs are scaled by 2^-s
// so the series runs on a measure of norm at most 1/2, then squared s times;
// per-stage tolerances are split so the total error stays below tol.
LatticeMeasure exp_measure(const LatticeMeasure& m, double tol = kDefaultTol);

// ln m = sum_k (-1)^{k+1}/k (m - I)^k; requires ||m - I|| < 1.
LatticeMeasure log_measure(const LatticeMeasure& m, double tol = kDefaultTol);

// Nonnegative integer s: binary exponentiation. Otherwise exp(s ln m).
LatticeMeasure power(const LatticeMeasure& m, double s, double tol = kDefaultTol);

std::complex<double> char_fn(const LatticeMeasure& m, double t);

// Drops outer coefficients, smallest end first, while the discarded absolute
// mass stays within eps.
LatticeMeasure truncate(const LatticeMeasure& m, double eps);

// Pushforward under k -> a k.
LatticeMeasure scale_support(const LatticeMeasure& m, std::int64_t a);

void write_measure_csv(std::ostream& out, const LatticeMeasure& m);
LatticeMeasure read_measure_csv(std::istream& in);

}  // namespace mbcp
