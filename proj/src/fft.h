#pragma once

#include <complex>
#include <span>
#include <vector>

namespace groove::detail {

/// Real-input FFT of fixed length backed by FFTW. One instance per thread;
/// construction is serialized internally because FFTW planning is not re-entrant.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  /// Forward transform of `in` (zero-padded or truncated to n). Unnormalized.
  void forward(std::span<const double> in, std::vector<std::complex<double>>& out);

  /// Inverse transform of n/2+1 bins. Unnormalized (scaled by n).
  void inverse(std::span<const std::complex<double>> in, std::vector<double>& out);

 private:
  std::size_t n_;
  double* real_;
  void* spectrum_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace groove::detail
