#pragma once

#include <complex>
#include <vector>

#include "scarma/rng.hpp"

namespace scarma {

// Parameters (alpha, sigma, beta, mu) of a stable law: alpha is the index of
// stability in (0,2], sigma > 0 the scale, beta in [-1,1] the skewness and mu
// the shift.
struct StableParams {
  double alpha = 2.0;
  double sigma = 1.0;
  double beta = 0.0;
  double mu = 0.0;

  bool symmetric() const { return beta == 0.0 && mu == 0.0; }
  void check() const;  // throws std::invalid_argument on a bad parameter
};

// Characteristic exponent phi(z) with E e^{izZ} = exp(phi(z)); separate
// branches for alpha != 1 and alpha == 1.
std::complex<double> char_exponent(const StableParams& params, double z);

// Tail constant C_alpha with n P(|Z| > n^{1/alpha}) -> C_alpha sigma^alpha for
// the symmetric law; defined for alpha in (0,2), continuous at alpha = 1.
double tail_constant(double alpha);

// One exact draw via the Chambers-Mallows-Stuck transform. All parameter
// regimes are covered, including the logarithmic branch at alpha = 1 with
// beta != 0 and totally skewed laws with alpha < 1.
double sample(const StableParams& params, RngStream& rng);

// n iid increments of the corresponding Levy process over steps of length dt,
// i.e. draws from S_alpha(sigma dt^{1/alpha}, beta, mu dt).
std::vector<double> increments(const StableParams& params, double dt,
                               std::int64_t n, RngStream& rng);

}  // namespace scarma
