#include "scarma/limitlaw.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "scarma/quad.hpp"
#include "scarma/stable.hpp"

namespace scarma {

namespace {

Eigen::VectorXcd resolvent_vector(const Eigen::MatrixXd& phi, double omega) {
  const int p = static_cast<int>(phi.rows());
  const std::complex<double> e_miw(std::cos(omega), -std::sin(omega));
  Eigen::MatrixXcd lhs =
      Eigen::MatrixXcd::Identity(p, p) - phi.cast<std::complex<double>>() * e_miw;
  Eigen::VectorXcd ep = Eigen::VectorXcd::Zero(p);
  ep[p - 1] = 1.0;
  return e_miw * lhs.partialPivLu().solve(ep);
}

Eigen::ArrayXd midpoint_grid(int n) {
  Eigen::ArrayXd w(n);
  for (int i = 0; i < n; ++i)
    w[i] = -std::numbers::pi +
           2.0 * std::numbers::pi * (i + 0.5) / static_cast<double>(n);
  return w;
}

}  // namespace

std::complex<double> sampled_transfer(const CarmaSpec& spec0, double s,
                                      double omega) {
  spec0.check();
  if (s < 0.0 || s > spec0.delta)
    throw std::invalid_argument("sampled_transfer: s must lie in [0, delta]");
  const Eigen::MatrixXd a = companion(spec0.ar);
  const Eigen::MatrixXd phi = matrix_exp(a, spec0.delta);
  const Eigen::VectorXd c = spec0.c_vec();
  const Eigen::VectorXcd r = resolvent_vector(phi, omega);
  const Eigen::RowVectorXd row = c.transpose() * matrix_exp(a, spec0.delta - s);
  std::complex<double> val = row.cast<std::complex<double>>().dot(r);
  if (s == 0.0) val += c[spec0.p() - 1];  // j = 0 term g(0) = c^T e_p
  return val;
}

SignedPowerIntegrals signed_power_integrals(
    const std::function<double(double)>& g, double a, double b, double power,
    double abs_tol, int scan_points) {
  SignedPowerIntegrals out;
  out.abs_tol = abs_tol;
  if (scan_points < 3) scan_points = 3;

  std::vector<double> xs(scan_points), vs(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    xs[i] = a + (b - a) * static_cast<double>(i) / (scan_points - 1);
    vs[i] = g(xs[i]);
  }
  for (int i = 0; i + 1 < scan_points; ++i) {
    if (vs[i] == 0.0 || vs[i] * vs[i + 1] >= 0.0) continue;
    double lo = xs[i], hi = xs[i + 1], flo = vs[i];
    for (int it = 0; it < 100 && hi - lo > 1e-14 * (b - a); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = g(mid);
      if (flo * fm <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    out.roots.push_back(0.5 * (lo + hi));
  }

  std::vector<double> pts;
  pts.push_back(a);
  for (double r : out.roots) pts.push_back(r);
  pts.push_back(b);
  const double seg_tol = abs_tol / static_cast<double>(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.plus += adaptive_simpson(
        [&](double u) { return std::pow(std::max(g(u), 0.0), power); }, pts[i],
        pts[i + 1], seg_tol);
    out.minus += adaptive_simpson(
        [&](double u) { return std::pow(std::max(-g(u), 0.0), power); }, pts[i],
        pts[i + 1], seg_tol);
  }
  return out;
}

LimitKernel::LimitKernel(const ParamFamily& family,
                         const Eigen::VectorXd& theta0, double delta,
                         int grid_log2)
    : family_(family), theta0_(theta0), delta_(delta) {
  const CarmaSpec spec0 = family.make(theta0, delta);
  if (!validate(spec0).pass())
    throw std::invalid_argument("limit kernel: theta0 fails validation");
  a0_ = companion(spec0.ar);
  c0_ = spec0.c_vec();
  const Eigen::MatrixXd phi0 = matrix_exp(a0_, delta);

  const int n = 1 << grid_log2;
  const Eigen::ArrayXd omega = midpoint_grid(n);
  resolvent_.resize(n, spec0.p());
  for (int i = 0; i < n; ++i)
    resolvent_.row(i) = resolvent_vector(phi0, omega[i]).transpose();

  const TransferArtifacts art0 = solve_riccati(spec0);
  std::vector<double> w(omega.data(), omega.data() + n), vals(n);
  pi_abs2_grid(art0, w, vals);
  pi2_theta0_ = Eigen::Map<Eigen::ArrayXd>(vals.data(), n);
}

Eigen::ArrayXd LimitKernel::pi2_grid(const Eigen::VectorXd& theta) const {
  const CarmaSpec spec = family_.make(theta, delta_);
  if (!validate(spec).pass())
    throw std::invalid_argument("limit kernel: theta fails validation");
  const TransferArtifacts art = solve_riccati(spec);
  const int n = static_cast<int>(resolvent_.rows());
  const Eigen::ArrayXd omega = midpoint_grid(n);
  std::vector<double> w(omega.data(), omega.data() + n), vals(n);
  pi_abs2_grid(art, w, vals);
  return Eigen::Map<Eigen::ArrayXd>(vals.data(), n);
}

Eigen::ArrayXd LimitKernel::transfer_abs2(double u) const {
  const Eigen::RowVectorXd row = c0_.transpose() * matrix_exp(a0_, delta_ - u);
  const Eigen::VectorXcd h = resolvent_ * row.transpose().cast<std::complex<double>>();
  return h.array().abs2();
}

double LimitKernel::bracket(const Eigen::ArrayXd& weight, double u) const {
  return (weight * transfer_abs2(u)).mean();
}

BetaDiagnostic beta_diag(const ParamFamily& family, const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& theta0, double delta,
                         double alpha, double sigma,
                         const LimitKernel* shared) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("beta_diag: alpha must be in (0,2)");
  BetaDiagnostic diag;
  diag.theta = theta;
  diag.theta0 = theta0;
  if ((theta - theta0).cwiseAbs().maxCoeff() == 0.0) return diag;  // convention

  std::optional<LimitKernel> own;
  const LimitKernel* kernel = shared;
  if (kernel == nullptr) {
    own.emplace(family, theta0, delta);
    kernel = &*own;
  }
  const Eigen::ArrayXd dpi2 = kernel->pi2_grid(theta) - kernel->pi2_theta0();

  const auto g = [&](double u) { return kernel->bracket(dpi2, u); };
  const SignedPowerIntegrals ints =
      signed_power_integrals(g, 0.0, delta, alpha / 2.0);
  diag.beta_plus = ints.plus;
  diag.beta_minus = ints.minus;
  const double total = ints.plus + ints.minus;
  diag.beta = total > 0.0 ? (ints.plus - ints.minus) / total : 0.0;
  const double sig_pow =
      std::pow(sigma, alpha) * tail_constant(alpha) / tail_constant(alpha / 2.0) * total;
  diag.sigma_scale = sig_pow > 0.0 ? std::pow(sig_pow, 2.0 / alpha) : 0.0;
  diag.quad_error = ints.abs_tol * (static_cast<double>(ints.roots.size()) + 1.0);
  return diag;
}

double w_ou(double theta, double theta0, double delta, int grid_log2) {
  if (!(theta < 0.0) || !(theta0 < 0.0))
    throw std::invalid_argument("w_ou: both parameters must be negative");
  const int n = 1 << grid_log2;
  const Eigen::ArrayXd omega = midpoint_grid(n);
  const double a = std::exp(theta * delta), b = std::exp(theta0 * delta);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cw = std::cos(omega[i]);
    acc += (1.0 + a * a - 2.0 * a * cw) / (1.0 + b * b - 2.0 * b * cw);
  }
  return acc / static_cast<double>(n);
}

Eigen::MatrixXd simulate_limit_w(const ParamFamily& family,
                                 const std::vector<Eigen::VectorXd>& grid,
                                 const Eigen::VectorXd& theta0, double delta,
                                 double alpha, double sigma, int reps,
                                 RngStream& rng, int m) {
  if (reps < 1) throw std::invalid_argument("simulate_limit_w: reps must be >= 1");
  if (m < 1) throw std::invalid_argument("simulate_limit_w: m must be >= 1");
  const LimitKernel kernel(family, theta0, delta);

  // brackets (1/2pi) int |Pi(theta)|^2 |transfer(s,.)|^2 dw at the midpoints
  const int ng = static_cast<int>(grid.size());
  Eigen::MatrixXd bracket(m, ng);
  std::vector<Eigen::ArrayXd> pi2(static_cast<std::size_t>(ng));
  for (int j = 0; j < ng; ++j) pi2[static_cast<std::size_t>(j)] = kernel.pi2_grid(grid[j]);
  for (int i = 0; i < m; ++i) {
    const double s = (static_cast<double>(i) + 0.5) * delta / static_cast<double>(m);
    const Eigen::ArrayXd t2 = kernel.transfer_abs2(s);
    for (int j = 0; j < ng; ++j)
      bracket(i, j) = (pi2[static_cast<std::size_t>(j)] * t2).mean();
  }

  StableParams inc;
  inc.alpha = alpha / 2.0;
  inc.beta = 1.0;
  inc.mu = 0.0;
  const double scale0 =
      sigma * sigma *
      std::pow(tail_constant(alpha) / tail_constant(alpha / 2.0), 2.0 / alpha);
  inc.sigma = scale0 * std::pow(delta / static_cast<double>(m), 2.0 / alpha);

  Eigen::MatrixXd out(reps, ng);
  Eigen::VectorXd dl(m);
  for (int r = 0; r < reps; ++r) {
    for (int i = 0; i < m; ++i) dl[i] = sample(inc, rng);
    out.row(r) = (bracket.transpose() * dl).transpose();
  }
  return out;
}

StableLimitParams acvf_limit_params(const ParamFamily& family,
                                    const Eigen::VectorXd& theta0, double delta,
                                    double alpha, double sigma, int lag) {
  if (lag < 0) throw std::invalid_argument("acvf_limit_params: lag must be >= 0");
  const CarmaSpec spec = family.make(theta0, delta);
  if (!validate(spec).pass())
    throw std::invalid_argument("acvf_limit_params: theta0 fails validation");
  const int p = spec.p();
  const Eigen::MatrixXd a = companion(spec.ar);
  const Eigen::MatrixXd phi = matrix_exp(a, delta);
  const Eigen::VectorXd c = spec.c_vec();
  Eigen::MatrixXd phi_h = Eigen::MatrixXd::Identity(p, p);
  for (int i = 0; i < lag; ++i) phi_h = phi_h * phi;

  // S(s) = sum_{j>=1} v_j v_j^T with v_j = phi^{j-1} e^{A(delta-s)} e_p solves
  // the discrete Lyapunov equation S = v_1 v_1^T + phi S phi^T
  const int pp = p * p;
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(pp, pp);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        for (int l = 0; l < p; ++l)
          lhs(i + p * j, k + p * l) -= phi(i, k) * phi(j, l);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);

  auto g_lag = [&](double s) {
    const Eigen::VectorXd w = matrix_exp(a, delta - s).col(p - 1);
    const Eigen::MatrixXd w2 = w * w.transpose();
    Eigen::VectorXd vec = lu.solve(Eigen::Map<const Eigen::VectorXd>(w2.data(), pp));
    const Eigen::MatrixXd smat = Eigen::Map<Eigen::MatrixXd>(vec.data(), p, p);
    return c.dot(smat * (phi_h.transpose() * c));
  };

  const SignedPowerIntegrals ints =
      signed_power_integrals(g_lag, 0.0, delta, alpha / 2.0);
  const double total = ints.plus + ints.minus;
  StableLimitParams out;
  out.skew = total > 0.0 ? (ints.plus - ints.minus) / total : 0.0;
  const double sig_pow =
      std::pow(sigma, alpha) * tail_constant(alpha) / tail_constant(alpha / 2.0) * total;
  out.scale = sig_pow > 0.0 ? std::pow(sig_pow, 2.0 / alpha) : 0.0;
  return out;
}

std::vector<BetaGridRow> beta_grid(const ParamFamily& family,
                                   const Eigen::VectorXd& theta0, double delta,
                                   double alpha, int coord, double lo,
                                   double hi, int points) {
  if (coord < 0 || coord >= family.dim)
    throw std::invalid_argument("beta_grid: coordinate out of range");
  if (points < 1) throw std::invalid_argument("beta_grid: need at least one point");
  const LimitKernel kernel(family, theta0, delta);
  std::vector<BetaGridRow> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    Eigen::VectorXd theta = theta0;
    theta[coord] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1.0);
    const BetaDiagnostic d =
        beta_diag(family, theta, theta0, delta, alpha, 1.0, &kernel);
    rows.push_back({theta[coord], d.beta, d.beta_plus, d.beta_minus});
  }
  return rows;
}

}  // namespace scarma
