#include "mbcp/markov_binomial.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "mbcp/csv.hpp"
#include "mbcp/errors.hpp"

namespace mbcp {

using cplx = std::complex<double>;

void MBParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1), got " + format_double(p));
  if (!(q_bar > 0.0 && q_bar < 1.0)) {
    throw DomainError("q_bar must lie in (0,1), got " + format_double(q_bar));
  }
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("p0 must lie in [0,1], got " + format_double(p0));
  if (n < 1) throw DomainError("n must be a positive integer, got " + std::to_string(n));
}

LatticeMeasure brute_force(const MBParams& params) {
  params.validate();
  if (params.n > kBruteForceMaxN) {
    throw ResourceError("brute force enumeration limited to n <= " + std::to_string(kBruteForceMaxN) +
                        ", got n = " + std::to_string(params.n));
  }
  const auto n = static_cast<unsigned>(params.n);
  // trans[from][to]
  const double trans[2][2] = {{params.p_bar(), params.q_bar}, {params.q(), params.p}};
  std::vector<double> mass(n + 1, 0.0);
  const std::uint64_t paths = std::uint64_t{1} << (n + 1);
  for (std::uint64_t path = 0; path < paths; ++path) {
    unsigned prev = path & 1U;
    double prob = prev ? params.p0 : 1.0 - params.p0;
    unsigned count = 0;
    for (unsigned i = 1; i <= n; ++i) {
      const unsigned cur = (path >> i) & 1U;
      prob *= trans[prev][cur];
      count += cur;
      prev = cur;
    }
    mass[count] += prob;
  }
  return LatticeMeasure(0, std::move(mass));
}

LatticeMeasure exact_dp(const MBParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n);
  const double p = params.p, q = params.q(), qb = params.q_bar, pb = params.p_bar();
  // in0[k] = P(S_i = k, xi_i = 0), in1[k] = P(S_i = k, xi_i = 1)
  std::vector<double> in0(n + 1, 0.0), in1(n + 1, 0.0), out0(n + 1, 0.0), out1(n + 1, 0.0);
  in0[0] = 1.0 - params.p0;
  in1[0] = params.p0;
  for (std::size_t i = 1; i <= n; ++i) {
    out0[0] = in0[0] * pb + in1[0] * q;
    out1[0] = 0.0;
    for (std::size_t k = 1; k <= i; ++k) {
      out0[k] = in0[k] * pb + in1[k] * q;
      out1[k] = in0[k - 1] * qb + in1[k - 1] * p;
    }
    std::swap(in0, out0);
    std::swap(in1, out1);
  }
  std::vector<double> mass(n + 1);
  for (std::size_t k = 0; k <= n; ++k) mass[k] = in0[k] + in1[k];
  return LatticeMeasure(0, std::move(mass));
}

namespace {

using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

cplx char_fn_unchecked(const MBParams& params, double t) {
  const cplx e = std::polar(1.0, t);
  Mat2 base = {cplx(params.p_bar()), params.q_bar * e, cplx(params.q()), params.p * e};
  Mat2 acc = {cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
  auto k = static_cast<std::uint64_t>(params.n);
  while (k > 0) {
    if (k & 1U) acc = mul(acc, base);
    k >>= 1U;
    if (k > 0) base = mul(base, base);
  }
  const double v0 = 1.0 - params.p0, v1 = params.p0;
  return v0 * (acc[0] + acc[1]) + v1 * (acc[2] + acc[3]);
}

cplx discriminant(const MBParams& params, cplx e) {
  const cplx a = params.p * e + params.p_bar();
  return a * a + 4.0 * e * (params.q_bar - params.p);
}

cplx root_at_zero(const MBParams& params) { return cplx(1.0 - (params.p - params.q_bar), 0.0); }

// Continues sqrt(D) from (t_from, root) to t_to in `steps` equal steps.
cplx continue_root(const MBParams& params, double t_from, cplx root, double t_to, int steps) {
  for (int k = 1; k <= steps; ++k) {
    const double tau = t_from + (t_to - t_from) * static_cast<double>(k) / steps;
    const cplx r = std::sqrt(discriminant(params, std::polar(1.0, tau)));
    root = (std::abs(r - root) <= std::abs(r + root)) ? r : -r;
  }
  return root;
}

EigenComponents components_from_root(const MBParams& params, double t, cplx root) {
  const cplx e = std::polar(1.0, t);
  if (std::abs(root) * std::abs(root) < 1e-14) {
    throw DomainError("degenerate discriminant at t = " + format_double(t));
  }
  const double p = params.p, q = params.q(), qb = params.q_bar, p0 = params.p0;
  const cplx a = p * e + params.p_bar();
  EigenComponents c;
  c.lambda1 = 0.5 * (a + root);
  c.lambda2 = 0.5 * (a - root);
  const cplx u1 = (q + qb + p * (e - 1.0)) / root;
  const cplx u0 = (q + qb + (2.0 * qb - p) * (e - 1.0)) / root;
  c.w1 = 0.5 * p0 * (1.0 + u1) + 0.5 * (1.0 - p0) * (1.0 + u0);
  c.w2 = 0.5 * p0 * (1.0 - u1) + 0.5 * (1.0 - p0) * (1.0 - u0);
  return c;
}

void require_cond1(const MBParams& params) {
  params.validate();
  if (!params.satisfies_cond1()) {
    throw DomainError("eigen decomposition requires p <= 1/2 and q_bar <= 1/30");
  }
}

}  // namespace

cplx mb_char_fn(const MBParams& params, double t) {
  params.validate();
  return char_fn_unchecked(params, t);
}

LatticeMeasure exact_spectral(const MBParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n);
  const std::size_t size = std::bit_ceil(n + 1);
  const std::size_t bins = size / 2 + 1;
  std::vector<cplx> half(bins);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(size);
  for (std::size_t j = 0; j < bins; ++j) {
    // conj(F(t)) = F(-t): the real inverse transform then carries e^{-itk}.
    half[j] = std::conj(char_fn_unchecked(params, step * static_cast<double>(j)));
  }
  auto values = detail::hermitian_to_real(half, size);
  values.resize(n + 1);
  const double scale = 1.0 / static_cast<double>(size);
  for (auto& v : values) v *= scale;
  return LatticeMeasure(0, std::move(values));
}

double mean_formula(const MBParams& params) {
  params.validate();
  const double p = params.p, q = params.q(), qb = params.q_bar, p0 = params.p0;
  const double g1 = q * qb / (q + qb);
  const double k1 = g1 * ((qb - p) / (q + qb) - p0);
  const double k2 = p0 * p * q / (q + qb);
  const double decay = std::pow(p - qb, static_cast<double>(params.n));
  return (static_cast<double>(params.n) * g1 + (k1 + k2) * (1.0 - decay)) / q;
}

EigenComponents eigen_components_hat(const MBParams& params, double t) {
  require_cond1(params);
  const cplx root = continue_root(params, 0.0, root_at_zero(params), t, kBranchTrackingSteps);
  return components_from_root(params, t, root);
}

std::vector<EigenComponents> eigen_components_on_grid(const MBParams& params,
                                                      std::span<const double> ts) {
  require_cond1(params);
  if (!std::is_sorted(ts.begin(), ts.end())) throw DomainError("t-grid must be sorted ascending");
  const double max_step = std::numbers::pi / (kBranchTrackingSteps / 2);
  auto sub_steps = [&](double a, double b) {
    return std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_step)));
  };
  std::vector<EigenComponents> out(ts.size());
  const auto split = std::lower_bound(ts.begin(), ts.end(), 0.0) - ts.begin();
  // Upward from zero.
  double t_prev = 0.0;
  cplx root = root_at_zero(params);
  for (auto j = split; j < static_cast<std::ptrdiff_t>(ts.size()); ++j) {
    const double t = ts[static_cast<std::size_t>(j)];
    root = continue_root(params, t_prev, root, t, sub_steps(t_prev, t));
    out[static_cast<std::size_t>(j)] = components_from_root(params, t, root);
    t_prev = t;
  }
  // Downward from zero.
  t_prev = 0.0;
  root = root_at_zero(params);
  for (auto j = split - 1; j >= 0; --j) {
    const double t = ts[static_cast<std::size_t>(j)];
    root = continue_root(params, t_prev, root, t, sub_steps(t_prev, t));
    out[static_cast<std::size_t>(j)] = components_from_root(params, t, root);
    t_prev = t;
  }
  return out;
}

EigenMeasures eigen_component_measures(const MBParams& params, std::size_t grid_size) {
  if (grid_size < 8 || !std::has_single_bit(grid_size)) {
    throw DomainError("grid size must be a power of two >= 8");
  }
  const std::size_t bins = grid_size / 2 + 1;
  std::vector<double> ts(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    ts[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid_size);
  }
  const auto comps = eigen_components_on_grid(params, ts);
  auto invert = [&](auto pick) {
    std::vector<cplx> half(bins);
    for (std::size_t j = 0; j < bins; ++j) half[j] = std::conj(pick(comps[j]));
    const auto raw = detail::hermitian_to_real(half, grid_size);
    // Rotate so index 0 holds lattice point -grid_size/2.
    std::vector<double> c(grid_size);
    const std::size_t h = grid_size / 2;
    const double scale = 1.0 / static_cast<double>(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) c[(k + h) % grid_size] = raw[k] * scale;
    return LatticeMeasure(-static_cast<std::int64_t>(h), std::move(c));
  };
  return {invert([](const EigenComponents& c) { return c.lambda1; }),
          invert([](const EigenComponents& c) { return c.lambda2; }),
          invert([](const EigenComponents& c) { return c.w1; }),
          invert([](const EigenComponents& c) { return c.w2; })};
}

}  // namespace mbcp
