#include "scarma/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace scarma {

namespace {
// FFTW planning is not thread-safe; execution of a private plan is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> fourier_freqs(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("fourier_freqs: n must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(2 * n));
  for (std::int64_t j = -n + 1; j <= n; ++j)
    w[static_cast<std::size_t>(j + n - 1)] =
        std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return w;
}

double sample_acvf(std::span<const double> y, std::int64_t h) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (n < 1) throw std::invalid_argument("sample_acvf: empty series");
  const std::int64_t ah = std::llabs(h);
  if (ah >= n) throw std::invalid_argument("sample_acvf: |h| must be < n");
  double acc = 0.0;
  for (std::int64_t k = 0; k + ah < n; ++k) acc += y[k + ah] * y[k];
  return acc / static_cast<double>(n);
}

Periodogram periodogram(std::span<const double> y) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (n < 1) throw std::invalid_argument("periodogram: empty series");
  const std::int64_t m = 2 * n;

  std::vector<std::complex<double>> buf(static_cast<std::size_t>(m), {0.0, 0.0});
  // series occupies indices 1..n of the zero-padded length-2n input, so the
  // DFT bin j carries sum_k y_k e^{-i pi j k / n}; |.|^2 is symmetric in j.
  for (std::int64_t k = 0; k < n; ++k) buf[static_cast<std::size_t>(k + 1)] = y[k];

  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(m), reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  Periodogram out;
  out.freqs = fourier_freqs(n);
  out.values.resize(static_cast<std::size_t>(m));
  const double scale = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
  for (std::int64_t j = -n + 1; j <= n; ++j) {
    const std::int64_t bin = ((j % m) + m) % m;
    out.values[static_cast<std::size_t>(j + n - 1)] =
        std::norm(buf[static_cast<std::size_t>(bin)]) * scale;
  }
  return out;
}

}  // namespace scarma
