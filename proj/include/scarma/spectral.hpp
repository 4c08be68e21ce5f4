#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace scarma {

// Fourier frequencies pi*j/n for j = -n+1, ..., n (2n values).
std::vector<double> fourier_freqs(std::int64_t n);

// Uncentered sample autocovariance (1/n) sum_{k=1}^{n-|h|} y_{k+|h|} y_k.
double sample_acvf(std::span<const double> y, std::int64_t h);

struct Periodogram {
  std::vector<double> freqs;   // fourier_freqs(n)
  std::vector<double> values;  // I_n at those frequencies
  std::int64_t n() const { return static_cast<std::int64_t>(values.size()) / 2; }
};

// I_n(w) = |sum_k y_k e^{ikw}|^2 / (2 pi n) at all 2n Fourier frequencies,
// evaluated through one FFT of length 2n.
Periodogram periodogram(std::span<const double> y);

}  // namespace scarma
