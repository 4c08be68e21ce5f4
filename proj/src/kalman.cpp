#include "scarma/kalman.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

#include "scarma/quad.hpp"

namespace scarma {

namespace {

Eigen::MatrixXd gramian_block(const Eigen::MatrixXd& a, double delta) {
  const int p = static_cast<int>(a.rows());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  b.topLeftCorner(p, p) = a;
  b(p - 1, 2 * p - 1) = 1.0;  // e_p e_p^T block
  b.bottomRightCorner(p, p) = -a.transpose();
  const Eigen::MatrixXd e = matrix_exp(b, delta);
  const Eigen::MatrixXd g =
      e.topRightCorner(p, p) * e.topLeftCorner(p, p).transpose();
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd gramian_lyapunov(const Eigen::MatrixXd& a, double delta) {
  const int p = static_cast<int>(a.rows());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(p, p);
  q(p - 1, p - 1) = 1.0;
  // A P + P A^T = -Q via the Kronecker form; needs Re(eig A) < 0
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd lhs = Eigen::kroneckerProduct(id, a).eval() +
                        Eigen::kroneckerProduct(a, id).eval();
  Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), p * p);
  Eigen::VectorXd vec = lhs.partialPivLu().solve(rhs);
  Eigen::MatrixXd pinf = Eigen::Map<Eigen::MatrixXd>(vec.data(), p, p);
  pinf = 0.5 * (pinf + pinf.transpose()).eval();
  const Eigen::MatrixXd phi = matrix_exp(a, delta);
  Eigen::MatrixXd g = pinf - phi * pinf * phi.transpose();
  return 0.5 * (g + g.transpose());
}

// Ascending coefficients of det(I - M z) from the eigenvalues of M.
Eigen::VectorXd char_poly_reversed(const Eigen::MatrixXd& m) {
  Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(m).eigenvalues();
  const int p = static_cast<int>(ev.size());
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(p + 1);
  coef[0] = 1.0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j >= 1; --j) coef[j] -= ev[i] * coef[j - 1];
  }
  return coef.real();
}

std::complex<double> horner(const Eigen::VectorXd& coef, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (int i = static_cast<int>(coef.size()) - 1; i >= 0; --i)
    acc = acc * z + coef[i];
  return acc;
}

}  // namespace

Eigen::MatrixXd gramian(const Eigen::MatrixXd& a, double delta) {
  if (a.rows() != a.cols()) throw std::invalid_argument("gramian: square matrix required");
  if (delta == 0.0) return Eigen::MatrixXd::Zero(a.rows(), a.cols());
  if (!(delta > 0.0)) throw std::invalid_argument("gramian: delta must be >= 0");
  const double stiffness = (a * delta).cwiseAbs().rowwise().sum().maxCoeff();
  if (stiffness > 25.0) return gramian_lyapunov(a, delta);
  return gramian_block(a, delta);
}

TransferArtifacts solve_riccati(const CarmaSpec& spec) {
  spec.check();
  if (!validate(spec).pass())
    throw std::invalid_argument("solve_riccati: spec fails validation");

  TransferArtifacts art;
  const Eigen::MatrixXd a = companion(spec.ar);
  art.c = spec.c_vec();
  art.phi = matrix_exp(a, spec.delta);
  const Eigen::MatrixXd g = gramian(a, spec.delta);

  Eigen::MatrixXd om = g;
  const int max_iter = 100000;
  int it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::VectorXd pc = art.phi * (om * art.c);
    const double s = art.c.dot(om * art.c);
    if (!(s > 1e-14))
      throw std::runtime_error("solve_riccati: singular innovation variance c'Omega c");
    Eigen::MatrixXd next = art.phi * om * art.phi.transpose() + g - (pc * pc.transpose()) / s;
    next = 0.5 * (next + next.transpose()).eval();
    const double change = (next - om).norm();
    om = next;
    if (change < 1e-13) break;
  }
  if (it == max_iter)
    throw std::runtime_error("solve_riccati: fixed point not reached");

  // one more application of the map gives the genuine residual
  {
    const Eigen::VectorXd pc = art.phi * (om * art.c);
    const double s = art.c.dot(om * art.c);
    const Eigen::MatrixXd mapped =
        art.phi * om * art.phi.transpose() + g - (pc * pc.transpose()) / s;
    art.residual = (mapped - om).norm();
  }

  art.omega = om;
  art.c_omega_c = art.c.dot(om * art.c);
  art.gain = art.phi * (om * art.c) / art.c_omega_c;
  art.m = art.phi - art.gain * art.c.transpose();
  art.iterations = it + 1;
  art.num_poly = char_poly_reversed(art.phi);
  art.den_poly = char_poly_reversed(art.m);
  return art;
}

std::complex<double> pi_transfer(std::complex<double> z,
                                 const TransferArtifacts& art) {
  const int p = static_cast<int>(art.c.size());
  Eigen::MatrixXcd lhs =
      Eigen::MatrixXcd::Identity(p, p) - art.m.cast<std::complex<double>>() * z;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(lhs);
  if (!lu.isInvertible())
    throw std::runtime_error("pi_transfer: singular resolvent at |z| = 1/eigenvalue");
  const Eigen::VectorXcd x = lu.solve(art.gain.cast<std::complex<double>>() * z);
  return 1.0 - art.c.cast<std::complex<double>>().dot(x);
}

void pi_abs2_grid(const TransferArtifacts& art, std::span<const double> omega,
                  std::span<double> out) {
  if (omega.size() != out.size())
    throw std::invalid_argument("pi_abs2_grid: size mismatch");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const std::complex<double> z(std::cos(omega[i]), std::sin(omega[i]));
    out[i] = std::norm(horner(art.num_poly, z)) / std::norm(horner(art.den_poly, z));
  }
}

PiInverseSeries pi_inverse_coeffs(const TransferArtifacts& art, int j_max) {
  if (j_max < 1) throw std::invalid_argument("pi_inverse_coeffs: J must be >= 1");
  PiInverseSeries s;
  s.coeffs.resize(j_max);
  Eigen::VectorXd v = art.gain;
  for (int j = 0; j < j_max; ++j) {
    s.coeffs[j] = art.c.dot(v);
    v = art.phi * v;
  }
  s.rho = Eigen::EigenSolver<Eigen::MatrixXd>(art.phi)
              .eigenvalues()
              .cwiseAbs()
              .maxCoeff();
  // |psi_j| <= C rho^j with C from the tail of the computed block
  double cbound = 0.0;
  for (int j = std::max(0, j_max - 16); j < j_max; ++j)
    cbound = std::max(cbound, std::abs(s.coeffs[j]) / std::pow(s.rho, j + 1));
  s.tail_bound = s.rho < 1.0
                     ? cbound * std::pow(s.rho, j_max + 1) / (1.0 - s.rho)
                     : std::numeric_limits<double>::infinity();
  return s;
}

SpectralDensity::SpectralDensity(const CarmaSpec& spec,
                                 const TransferArtifacts& art, double sigma_l2)
    : phi_(art.phi), sigma_l2_(sigma_l2), p_(spec.p()) {
  if (!(sigma_l2 > 0.0))
    throw std::invalid_argument("spectral density: sigma_l2 must be > 0");
  sigma_eps2_ = sigma_l2 * art.c_omega_c;

  const Eigen::MatrixXd a = companion(spec.ar);
  const Eigen::VectorXd c = spec.c_vec();
  const QuadRule& rule = gauss_legendre(64);
  const double half = 0.5 * spec.delta;
  rows_.reserve(rule.nodes.size());
  weights_.reserve(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double u = half * (1.0 + rule.nodes[k]);
    rows_.push_back(c.transpose() * matrix_exp(a, u));
    weights_.push_back(rule.weights[k] * half);
  }

  // series length from the geometric tail bound, aimed at ~1e-12
  const double rho = Eigen::EigenSolver<Eigen::MatrixXd>(art.phi)
                         .eigenvalues()
                         .cwiseAbs()
                         .maxCoeff();
  int j_max = 512;
  if (rho < 1.0) {
    const double need = std::log(1e-13 * (1.0 - rho)) / std::log(rho);
    j_max = std::clamp(static_cast<int>(need) + 8, 8, 100000);
  }
  psi_ = pi_inverse_coeffs(art, j_max).coeffs;
}

double SpectralDensity::integral_form(double omega) const {
  const std::complex<double> eiw(std::cos(omega), std::sin(omega));
  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(p_, p_) -
                         phi_.cast<std::complex<double>>() * eiw;
  Eigen::VectorXcd ep = Eigen::VectorXcd::Zero(p_);
  ep[p_ - 1] = 1.0;
  const Eigen::VectorXcd r = lhs.partialPivLu().solve(ep);
  double acc = 0.0;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::complex<double> val = rows_[k].cast<std::complex<double>>().dot(r);
    // RowVectorXd::dot conjugates the left factor; rows_ is real so this is the plain product
    acc += weights_[k] * std::norm(val);
  }
  return sigma_l2_ / (2.0 * std::numbers::pi) * acc;
}

double SpectralDensity::transfer_form(double omega) const {
  const std::complex<double> eiw(std::cos(omega), std::sin(omega));
  std::complex<double> inv = 0.0;
  for (int j = static_cast<int>(psi_.size()) - 1; j >= 0; --j)
    inv = (inv + psi_[j]) * eiw;
  inv += 1.0;
  return std::norm(inv) * sigma_eps2_ / (2.0 * std::numbers::pi);
}

SpectralDensityPair spectral_density_sampled(double omega,
                                             const CarmaSpec& spec,
                                             const TransferArtifacts& art,
                                             double sigma_l2) {
  SpectralDensity sd(spec, art, sigma_l2);
  return {sd.integral_form(omega), sd.transfer_form(omega)};
}

Eigen::MatrixXd sigma_wa(const ParamFamily& family,
                         const Eigen::VectorXd& theta0, double delta,
                         double fd_step, int grid_log2) {
  const int d = family.dim;
  const int n = 1 << grid_log2;
  std::vector<double> omega(n);
  for (int i = 0; i < n; ++i)
    omega[i] = -std::numbers::pi +
               2.0 * std::numbers::pi * (i + 0.5) / static_cast<double>(n);

  // log |Pi|^{-2} = -log |Pi|^2 on the grid for a given theta
  auto log_inv_pi2 = [&](const Eigen::VectorXd& th) {
    const TransferArtifacts art = solve_riccati(family.make(th, delta));
    std::vector<double> vals(omega.size());
    pi_abs2_grid(art, omega, vals);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = -std::log(vals[i]);
    return out;
  };

  Eigen::MatrixXd grads(n, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd up = theta0, dn = theta0;
    up[j] += fd_step;
    dn[j] -= fd_step;
    grads.col(j) = (log_inv_pi2(up) - log_inv_pi2(dn)) / (2.0 * fd_step);
  }

  const double dw = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i)
    info += dw * grads.row(i).transpose() * grads.row(i);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
  if (!lu.isInvertible())
    throw std::runtime_error("sigma_wa: information matrix is singular");
  Eigen::MatrixXd out = 4.0 * std::numbers::pi * lu.inverse();
  return 0.5 * (out + out.transpose());
}

}  // namespace scarma
