#include "fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace groove::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(n_);
  auto* spec = fftw_alloc_complex(n_ / 2 + 1);
  spectrum_ = spec;
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::vector<std::complex<double>>& out) {
  const std::size_t m = std::min(in.size(), n_);
  std::copy_n(in.begin(), m, real_);
  std::fill(real_ + m, real_ + n_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  out.resize(bins());
  // fftw_complex is layout-compatible with std::complex<double>.
  std::memcpy(static_cast<void*>(out.data()), spectrum_, bins() * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::vector<double>& out) {
  auto* spec = static_cast<fftw_complex*>(spectrum_);
  const std::size_t m = std::min(in.size(), bins());
  std::memcpy(static_cast<void*>(spec), in.data(), m * sizeof(fftw_complex));
  for (std::size_t k = m; k < bins(); ++k) spec[k][0] = spec[k][1] = 0.0;
  // c2r destroys its input; the spectrum buffer is scratch.
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  out.assign(real_, real_ + n_);
}

}  // namespace groove::detail
