#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "scarma/carma.hpp"

namespace scarma {

struct ArmaFit {
  Eigen::VectorXd ar;   // phi_1..phi_p of (1 - phi_1 z - ... - phi_p z^p)
  Eigen::VectorXd ma;   // theta_1..theta_q of (1 + theta_1 z + ... + theta_q z^q)
  double sigma2 = 0.0;  // innovation variance at the optimum
  double loglik = 0.0;  // Gaussian log-likelihood
  bool ok = false;
  std::string message;
};

// Gaussian quasi-maximum likelihood for an ARMA(p,q) model on y, by the
// state-space prediction-error decomposition. The search runs in
// partial-autocorrelation coordinates so every iterate is stationary and
// invertible; initial values come from a Hannan-Rissanen regression.
ArmaFit arma_mle(std::span<const double> y, int p, int q);

enum class GarciaStage { none, arma_mle, log_root, ma_match };

struct GarciaResult {
  Eigen::VectorXd theta;
  std::vector<std::complex<double>> lambda;  // recovered zeros of a(z)
  ArmaFit fit;
  bool failed = false;
  GarciaStage stage = GarciaStage::none;
  std::string message;
};

const char* to_string(GarciaStage s);

// Zeros z_j of 1 - phi_1 z - ... - phi_p z^p mapped to lambda_j = -log(z_j)/delta.
// Throws std::runtime_error when a root lies on the closed non-positive real
// axis or inside the closed unit disk (recovered exponent not stationary).
std::vector<std::complex<double>> recover_lambda(const Eigen::VectorXd& ar,
                                                 double delta);

// Kernel of the filtered sequence a_D(B) Y: h(s) = sum_i d_i g(s - i delta),
// where d are the ascending coefficients of a_D(z).
double filtered_kernel(const CarmaSpec& spec, std::span<const double> d,
                       double s);

// Formal L2 autocorrelation of the filtered kernel at lag k,
// r(k)/r(0) with r(k) = int_0^{p delta} h(s) h(s + k delta) ds.
double model_acf(const CarmaSpec& spec, std::span<const double> d, int k);

// MA(q) autocorrelation sum_i c_i c_{i+k} / sum_i c_i^2 of coefficients c
// (including the leading 1).
double ma_acf(std::span<const double> c, int k);

// Full indirect pipeline: ARMA(p,p-1) fit, AR-root exponentiation, then MA
// matching through autocorrelations over the MA part of the family box.
GarciaResult garcia_estimate(std::span<const double> y, double delta,
                             const ParamFamily& family);

}  // namespace scarma
