#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "scarma/carma.hpp"
#include "scarma/kalman.hpp"
#include "scarma/rng.hpp"

namespace scarma {

// Sum_j g(delta j - s) e^{-i j omega} for the kernel of spec0, in closed form
// through the geometric matrix series; the j = 0 term enters only at s = 0.
std::complex<double> sampled_transfer(const CarmaSpec& spec0, double s,
                                      double omega);

// Integrals of the positive and negative parts of g raised to `power`,
// with sign changes located by bisection before integrating (the integrand
// has an infinite derivative at the zeros for power < 1).
struct SignedPowerIntegrals {
  double plus = 0.0;
  double minus = 0.0;
  std::vector<double> roots;
  double abs_tol = 0.0;
};

SignedPowerIntegrals signed_power_integrals(
    const std::function<double(double)>& g, double a, double b, double power,
    double abs_tol = 1e-9, int scan_points = 257);

// Frequency-grid machinery shared by every limit-law computation for one
// (family, theta0) pair: resolvent vectors of the sampled transfer function
// and |Pi|^2 of the reference parameter on a fixed midpoint grid.
class LimitKernel {
 public:
  LimitKernel(const ParamFamily& family, const Eigen::VectorXd& theta0,
              double delta, int grid_log2 = 12);

  Eigen::ArrayXd pi2_grid(const Eigen::VectorXd& theta) const;
  const Eigen::ArrayXd& pi2_theta0() const { return pi2_theta0_; }

  // |sum_j g0(delta j - u) e^{-i j omega}|^2 across the grid
  Eigen::ArrayXd transfer_abs2(double u) const;

  // (1/2pi) integral of weight(omega) |transfer(u, omega)|^2 d omega
  double bracket(const Eigen::ArrayXd& weight, double u) const;

  double delta() const { return delta_; }
  const ParamFamily& family() const { return family_; }
  const Eigen::VectorXd& theta0() const { return theta0_; }

 private:
  ParamFamily family_;
  Eigen::VectorXd theta0_;
  double delta_;
  Eigen::MatrixXd a0_;
  Eigen::VectorXd c0_;
  Eigen::MatrixXcd resolvent_;  // grid x p rows of e^{-iw}(I - phi0 e^{-iw})^{-1} e_p
  Eigen::ArrayXd pi2_theta0_;
};

struct BetaDiagnostic {
  Eigen::VectorXd theta;
  Eigen::VectorXd theta0;
  double beta = 0.0;
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  double sigma_scale = 0.0;
  double quad_error = 0.0;
};

// Skewness decomposition of the limit of the Whittle-function difference at
// (theta, theta0): beta_plus/minus are the alpha/2-power integrals of the
// positive/negative parts of G, beta their normalized difference, and
// sigma_scale the scale of the alpha/2-stable limit law. At theta = theta0
// the convention beta = 0, sigma = 0 applies.
BetaDiagnostic beta_diag(const ParamFamily& family, const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& theta0, double delta,
                         double alpha, double sigma = 1.0,
                         const LimitKernel* shared = nullptr);

// Limit of the Ornstein-Uhlenbeck Whittle function up to a positive factor:
// (1/2pi) int |1 - e^{theta delta + iw}|^2 |1 - e^{theta0 delta + iw}|^{-2} dw.
double w_ou(double theta, double theta0, double delta, int grid_log2 = 12);

// Joint draws of the limiting Whittle functional over a parameter grid; the
// integral over the sampling interval is discretized on m subintervals with
// common totally skewed alpha/2-stable increments.
Eigen::MatrixXd simulate_limit_w(const ParamFamily& family,
                                 const std::vector<Eigen::VectorXd>& grid,
                                 const Eigen::VectorXd& theta0, double delta,
                                 double alpha, double sigma, int reps,
                                 RngStream& rng, int m = 512);

struct StableLimitParams {
  double scale = 0.0;
  double skew = 0.0;
};

// Stable parameters of the limit of n^{1-2/alpha} acvf(h).
StableLimitParams acvf_limit_params(const ParamFamily& family,
                                    const Eigen::VectorXd& theta0, double delta,
                                    double alpha, double sigma, int lag);

struct BetaGridRow {
  double coord_value = 0.0;
  double beta = 0.0;
  double beta_plus = 0.0;
  double beta_minus = 0.0;
};

// One-dimensional sweep of coordinate `coord`, the others held at theta0.
std::vector<BetaGridRow> beta_grid(const ParamFamily& family,
                                   const Eigen::VectorXd& theta0, double delta,
                                   double alpha, int coord, double lo,
                                   double hi, int points);

}  // namespace scarma
