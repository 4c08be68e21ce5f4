#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "scarma/carma.hpp"

namespace scarma {

// Everything the sampled-chain transfer function needs: the prediction
// covariance (Riccati fixed point), the gain, and the characteristic
// polynomials of e^{A delta} and e^{A delta} - K c^T used to evaluate
// |Pi|^2 on frequency grids.
struct TransferArtifacts {
  Eigen::MatrixXd phi;       // e^{A delta}
  Eigen::MatrixXd omega;     // Riccati solution
  Eigen::VectorXd gain;      // Kalman gain K
  Eigen::MatrixXd m;         // phi - K c^T
  Eigen::VectorXd c;         // housed MA vector
  double c_omega_c = 0.0;    // c^T Omega c
  double residual = 0.0;     // Frobenius norm of the fixed-point mismatch
  int iterations = 0;
  Eigen::VectorXd num_poly;  // det(I - phi z), ascending coefficients
  Eigen::VectorXd den_poly;  // det(I - m z), ascending coefficients
};

// Controllability Gramian int_0^delta e^{Au} e_p e_p^T e^{A^T u} du. Uses the
// augmented-block matrix exponential; for stiff A (large ||A delta||) the
// block form cancels catastrophically, so a Lyapunov-difference evaluation
// takes over.
Eigen::MatrixXd gramian(const Eigen::MatrixXd& a, double delta);

// Riccati fixed point by iteration from the Gramian; throws on
// non-convergence or a singular innovation variance.
TransferArtifacts solve_riccati(const CarmaSpec& spec);

// Pi(z) = 1 - c^T (I - (phi - K c^T) z)^{-1} K z.
std::complex<double> pi_transfer(std::complex<double> z,
                                 const TransferArtifacts& art);

// |Pi(e^{i w})|^2 at many frequencies through the characteristic-polynomial
// ratio det(I - phi z)/det(I - m z); identical to pi_transfer by the matrix
// determinant lemma but O(p) per point.
void pi_abs2_grid(const TransferArtifacts& art, std::span<const double> omega,
                  std::span<double> out);

struct PiInverseSeries {
  Eigen::VectorXd coeffs;   // psi_1..psi_J of Pi^{-1}(z) = 1 + sum psi_j z^j
  double rho = 0.0;         // spectral radius of phi
  double tail_bound = 0.0;  // bound on sum_{j>J} |psi_j|
};

PiInverseSeries pi_inverse_coeffs(const TransferArtifacts& art, int j_max);

// Sampled spectral density, both defining routes. `integral_form` integrates
// |c^T e^{Au}(I - e^{A delta + i w I})^{-1} e_p|^2 over one sampling interval;
// `transfer_form` evaluates |Pi^{-1}(e^{iw})|^2 sigma_eps^2 / (2 pi) through
// the inverse series.
class SpectralDensity {
 public:
  SpectralDensity(const CarmaSpec& spec, const TransferArtifacts& art,
                  double sigma_l2);

  double integral_form(double omega) const;
  double transfer_form(double omega) const;
  double sigma_eps2() const { return sigma_eps2_; }

 private:
  Eigen::MatrixXd phi_;
  std::vector<Eigen::RowVectorXd> rows_;  // c^T e^{A u_k} at the GL nodes
  std::vector<double> weights_;
  Eigen::VectorXd psi_;
  double sigma_l2_;
  double sigma_eps2_;
  int p_;
};

struct SpectralDensityPair {
  double integral_form;
  double transfer_form;
};

SpectralDensityPair spectral_density_sampled(double omega,
                                             const CarmaSpec& spec,
                                             const TransferArtifacts& art,
                                             double sigma_l2);

// Brownian-case asymptotic covariance of the adjusted Whittle estimator:
// 4 pi [ int grad log |Pi|^{-2} ^T grad log |Pi|^{-2} dw ]^{-1}, gradients by
// central differences.
Eigen::MatrixXd sigma_wa(const ParamFamily& family,
                         const Eigen::VectorXd& theta0, double delta,
                         double fd_step = 1e-5, int grid_log2 = 12);

}  // namespace scarma
