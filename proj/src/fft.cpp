#include "fft.hpp"

#include <fftw3.h>

#include <bit>
#include <memory>
#include <mutex>

namespace mbcp::detail {
namespace {

// The FFTW planner is not reentrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::vector<double> hermitian_to_real(std::span<const std::complex<double>> half_spectrum,
                                      std::size_t size) {
  const std::size_t bins = size / 2 + 1;
  auto in = fftw_buffer<fftw_complex>(bins);
  auto out = fftw_buffer<double>(size);
  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(size), in.get(), out.get(), FFTW_ESTIMATE);
  }
  Plan plan(raw);
  for (std::size_t j = 0; j < bins; ++j) {
    in[j][0] = half_spectrum[j].real();
    in[j][1] = half_spectrum[j].imag();
  }
  plan.execute();
  return std::vector<double>(out.get(), out.get() + size);
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
  const std::size_t len = a.size() + b.size() - 1;
  const std::size_t size = std::bit_ceil(len);
  const std::size_t bins = size / 2 + 1;
  auto ra = fftw_buffer<double>(size);
  auto rb = fftw_buffer<double>(size);
  auto ca = fftw_buffer<fftw_complex>(bins);
  auto cb = fftw_buffer<fftw_complex>(bins);
  fftw_plan fa, fb, back;
  {
    std::lock_guard lock(planner_mutex());
    fa = fftw_plan_dft_r2c_1d(static_cast<int>(size), ra.get(), ca.get(), FFTW_ESTIMATE);
    fb = fftw_plan_dft_r2c_1d(static_cast<int>(size), rb.get(), cb.get(), FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r_1d(static_cast<int>(size), ca.get(), ra.get(), FFTW_ESTIMATE);
  }
  Plan plan_a(fa), plan_b(fb), plan_back(back);
  std::fill(ra.get(), ra.get() + size, 0.0);
  std::fill(rb.get(), rb.get() + size, 0.0);
  std::copy(a.begin(), a.end(), ra.get());
  std::copy(b.begin(), b.end(), rb.get());
  plan_a.execute();
  plan_b.execute();
  for (std::size_t j = 0; j < bins; ++j) {
    const std::complex<double> x(ca[j][0], ca[j][1]);
    const std::complex<double> y(cb[j][0], cb[j][1]);
    const auto z = x * y;
    ca[j][0] = z.real();
    ca[j][1] = z.imag();
  }
  plan_back.execute();
  std::vector<double> result(ra.get(), ra.get() + len);
  const double scale = 1.0 / static_cast<double>(size);
  for (auto& v : result) v *= scale;
  return result;
}

}  // namespace mbcp::detail
