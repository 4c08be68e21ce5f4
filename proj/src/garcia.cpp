#include "scarma/garcia.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/Polynomials>

#include "scarma/optim.hpp"
#include "scarma/quad.hpp"

namespace scarma {

namespace {

// Monahan transform: unconstrained -> stationary AR (or invertible MA)
// coefficients through partial autocorrelations.
Eigen::VectorXd partrans(const Eigen::VectorXd& raw) {
  const int p = static_cast<int>(raw.size());
  Eigen::VectorXd pac(p);
  for (int i = 0; i < p; ++i) pac[i] = std::tanh(raw[i]);
  Eigen::VectorXd cur = pac;
  Eigen::VectorXd work = pac;
  for (int j = 1; j < p; ++j) {
    for (int k = 0; k < j; ++k) work[k] = cur[k] - cur[j] * cur[j - k - 1];
    for (int k = 0; k < j; ++k) cur[k] = work[k];
  }
  return cur;
}

// Inverse of partrans; returns false when the coefficients are not strictly
// stationary/invertible.
bool inv_partrans(const Eigen::VectorXd& coef, Eigen::VectorXd& raw) {
  const int p = static_cast<int>(coef.size());
  Eigen::VectorXd cur = coef;
  Eigen::VectorXd pac(p);
  for (int j = p - 1; j >= 0; --j) {
    const double a = cur[j];
    if (!(std::abs(a) < 1.0)) return false;
    pac[j] = a;
    Eigen::VectorXd prev(j);
    for (int k = 0; k < j; ++k)
      prev[k] = (cur[k] + a * cur[j - k - 1]) / (1.0 - a * a);
    cur.head(j) = prev;
  }
  raw.resize(p);
  for (int i = 0; i < p; ++i) raw[i] = std::atanh(std::clamp(pac[i], -0.999999, 0.999999));
  return true;
}

// -2 profile log-likelihood (up to constants) of an ARMA(p,q) model via the
// Kalman filter on the Harvey state space; sigma2 is concentrated out.
double arma_neg2_profile(std::span<const double> y, const Eigen::VectorXd& phi,
                         const Eigen::VectorXd& theta, double* sigma2_out) {
  const int p = static_cast<int>(phi.size());
  const int q = static_cast<int>(theta.size());
  const int r = std::max(p, q + 1);
  const std::int64_t n = static_cast<std::int64_t>(y.size());

  Eigen::MatrixXd t_mat = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < p; ++i) t_mat(i, 0) = phi[i];
  for (int i = 0; i + 1 < r; ++i) t_mat(i, i + 1) = 1.0;
  Eigen::VectorXd rvec = Eigen::VectorXd::Zero(r);
  rvec[0] = 1.0;
  for (int i = 0; i < q; ++i) rvec[i + 1] = theta[i];
  const Eigen::MatrixXd rr = rvec * rvec.transpose();

  // stationary initial covariance: P = T P T' + R R'
  Eigen::MatrixXd pmat(r, r);
  {
    const int rr2 = r * r;
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(rr2, rr2);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k)
          for (int l = 0; l < r; ++l)
            lhs(i + r * j, k + r * l) -= t_mat(i, k) * t_mat(j, l);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(rr.data(), rr2);
    Eigen::VectorXd vec = lhs.partialPivLu().solve(rhs);
    pmat = Eigen::Map<Eigen::MatrixXd>(vec.data(), r, r);
    pmat = 0.5 * (pmat + pmat.transpose()).eval();
  }

  Eigen::VectorXd a = Eigen::VectorXd::Zero(r);
  double sum_log_v = 0.0, sum_e2v = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double v = pmat(0, 0);
    if (!(v > 1e-300) || !std::isfinite(v))
      return std::numeric_limits<double>::infinity();
    const double e = y[k] - a[0];
    sum_log_v += std::log(v);
    sum_e2v += e * e / v;
    const Eigen::VectorXd pcol = pmat.col(0);
    const Eigen::VectorXd a_upd = a + pcol * (e / v);
    const Eigen::MatrixXd p_upd = pmat - (pcol * pcol.transpose()) / v;
    a = t_mat * a_upd;
    pmat = t_mat * p_upd * t_mat.transpose() + rr;
  }
  const double sigma2 = sum_e2v / static_cast<double>(n);
  if (sigma2_out) *sigma2_out = sigma2;
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    return std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * std::log(sigma2) + sum_log_v;
}

// Hannan-Rissanen: long AR by Yule-Walker, then joint regression of y on its
// own lags and the lagged residuals.
bool hannan_rissanen(std::span<const double> y, int p, int q,
                     Eigen::VectorXd& phi, Eigen::VectorXd& theta) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  const int m = static_cast<int>(
      std::min<std::int64_t>(n / 4, std::max<std::int64_t>(20, 2 * (p + q))));
  if (m < p + q || n <= m + p + q + 2) return false;

  // Yule-Walker via Levinson-Durbin on the sample autocovariance
  std::vector<double> gam(m + 1, 0.0);
  double mean = 0.0;  // series is heavy tailed; the raw second-moment form is used
  for (int h = 0; h <= m; ++h) {
    double acc = 0.0;
    for (std::int64_t k = 0; k + h < n; ++k) acc += y[k + h] * y[k];
    gam[h] = acc / static_cast<double>(n);
  }
  (void)mean;
  if (!(gam[0] > 0.0)) return false;
  Eigen::VectorXd acoef = Eigen::VectorXd::Zero(m);
  double v = gam[0];
  for (int k = 1; k <= m; ++k) {
    double acc = gam[k];
    for (int j = 1; j < k; ++j) acc -= acoef[j - 1] * gam[k - j];
    const double refl = acc / v;
    Eigen::VectorXd next = acoef;
    next[k - 1] = refl;
    for (int j = 1; j < k; ++j) next[j - 1] = acoef[j - 1] - refl * acoef[k - j - 1];
    acoef = next;
    v *= (1.0 - refl * refl);
    if (!(v > 0.0)) return false;
  }

  std::vector<double> resid(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t k = m; k < n; ++k) {
    double pred = 0.0;
    for (int j = 1; j <= m; ++j) pred += acoef[j - 1] * y[k - j];
    resid[static_cast<std::size_t>(k)] = y[k] - pred;
  }

  const std::int64_t start = m + std::max(p, q);
  const std::int64_t rows = n - start;
  if (rows < 8 * (p + q + 1)) return false;
  Eigen::MatrixXd x(rows, p + q);
  Eigen::VectorXd b(rows);
  for (std::int64_t i = 0; i < rows; ++i) {
    const std::int64_t k = start + i;
    b[i] = y[k];
    for (int j = 0; j < p; ++j) x(i, j) = y[k - 1 - j];
    for (int j = 0; j < q; ++j)
      x(i, p + j) = resid[static_cast<std::size_t>(k - 1 - j)];
  }
  const Eigen::VectorXd sol =
      (x.transpose() * x).ldlt().solve(x.transpose() * b);
  if (!sol.allFinite()) return false;
  phi = sol.head(p);
  theta = sol.tail(q);
  return true;
}

// Largest-|root| based shrink so the HR start is strictly inside the
// stationary/invertible region.
void shrink_into_region(Eigen::VectorXd& coef) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Eigen::VectorXd raw;
    if (inv_partrans(coef, raw)) return;
    coef *= 0.9;
  }
  coef.setZero();
}

const char* stage_name(GarciaStage s) {
  switch (s) {
    case GarciaStage::none: return "none";
    case GarciaStage::arma_mle: return "arma_mle";
    case GarciaStage::log_root: return "log_root";
    case GarciaStage::ma_match: return "ma_match";
  }
  return "none";
}

}  // namespace

const char* to_string(GarciaStage s) { return stage_name(s); }

ArmaFit arma_mle(std::span<const double> y, int p, int q) {
  ArmaFit fit;
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (p < 0 || q < 0 || p + q < 1) {
    fit.message = "arma_mle: need p + q >= 1";
    return fit;
  }
  if (n <= 10 * (p + q)) {
    fit.message = "arma_mle: series too short";
    return fit;
  }

  // starts in unconstrained (pacf) coordinates
  std::vector<Eigen::VectorXd> starts;
  {
    Eigen::VectorXd phi0, theta0;
    if (hannan_rissanen(y, p, q, phi0, theta0)) {
      shrink_into_region(phi0);
      shrink_into_region(theta0);
      Eigen::VectorXd rawp, rawq, start(p + q);
      if (inv_partrans(phi0, rawp) && inv_partrans(theta0, rawq)) {
        start << rawp, rawq;
        starts.push_back(start);
      }
    }
    starts.push_back(Eigen::VectorXd::Zero(p + q));
    Eigen::VectorXd mild = Eigen::VectorXd::Constant(p + q, 0.2);
    starts.push_back(mild);
  }

  auto objective = [&](const Eigen::VectorXd& raw) -> double {
    const Eigen::VectorXd phi = partrans(raw.head(p));
    const Eigen::VectorXd theta = partrans(raw.tail(q));
    return arma_neg2_profile(y, phi, theta, nullptr);
  };

  Box box;  // wide box in pacf coordinates; atanh(0.9999996) ~ 8
  box.lo = Eigen::VectorXd::Constant(p + q, -8.0);
  box.hi = Eigen::VectorXd::Constant(p + q, 8.0);

  NelderMeadOptions nm;
  nm.max_iter = 600;
  nm.diam_tol = 1e-9;
  nm.init_step_frac = 0.02;

  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const NelderMeadResult r = nelder_mead(objective, s, box, nm);
    if (r.value < best.value) best = r;
  }
  if (!std::isfinite(best.value)) {
    fit.message = "arma_mle: likelihood not finite at any start";
    return fit;
  }

  fit.ar = partrans(best.x.head(p));
  fit.ma = partrans(best.x.tail(q));
  double sigma2 = 0.0;
  const double neg2 = arma_neg2_profile(y, fit.ar, fit.ma, &sigma2);
  fit.sigma2 = sigma2;
  fit.loglik = -0.5 * (neg2 + static_cast<double>(n) * (1.0 + std::log(2.0 * std::numbers::pi)));
  fit.ok = true;
  return fit;
}

std::vector<std::complex<double>> recover_lambda(const Eigen::VectorXd& ar,
                                                 double delta) {
  const int p = static_cast<int>(ar.size());
  if (p < 1) throw std::invalid_argument("recover_lambda: empty AR part");
  Eigen::VectorXd poly(p + 1);  // 1 - phi_1 z - ... - phi_p z^p, ascending
  poly[0] = 1.0;
  for (int i = 0; i < p; ++i) poly[i + 1] = -ar[i];
  if (poly[p] == 0.0)
    throw std::runtime_error("recover_lambda: degenerate AR polynomial (phi_p = 0)");
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(poly);

  std::vector<std::complex<double>> lambda;
  lambda.reserve(p);
  for (const auto& z : solver.roots()) {
    if (std::abs(z) <= 1.0 + 1e-12)
      throw std::runtime_error(
          "recover_lambda: AR root inside the closed unit disk, recovered "
          "exponent not stationary");
    if (std::abs(z.imag()) <= 1e-12 && z.real() <= 0.0)
      throw std::runtime_error(
          "recover_lambda: AR root on the non-positive real axis, logarithm "
          "undefined");
    lambda.push_back(-std::log(z) / delta);
  }
  std::sort(lambda.begin(), lambda.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return lambda;
}

double filtered_kernel(const CarmaSpec& spec, std::span<const double> d,
                       double s) {
  if (s < 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    acc += d[i] * kernel(spec, s - static_cast<double>(i) * spec.delta);
  return acc;
}

double model_acf(const CarmaSpec& spec, std::span<const double> d, int k) {
  if (k < 0) throw std::invalid_argument("model_acf: lag must be >= 0");
  const int p = spec.p();
  const double upper = static_cast<double>(p) * spec.delta;
  auto corr = [&](int lag) {
    const double shift = static_cast<double>(lag) * spec.delta;
    double acc = 0.0;
    // kernel kinks at the delta multiples; integrate each cell separately
    for (int cell = 0; cell < p; ++cell) {
      const double a = cell * spec.delta;
      const double b = std::min(upper, (cell + 1) * spec.delta);
      acc += gl_integrate(
          [&](double s) {
            return filtered_kernel(spec, d, s) * filtered_kernel(spec, d, s + shift);
          },
          a, b, 128);
    }
    return acc;
  };
  const double r0 = corr(0);
  if (r0 < 1e-14)
    throw std::runtime_error("model_acf: filtered kernel has (numerically) no mass");
  if (k == 0) return 1.0;
  return corr(k) / r0;
}

double ma_acf(std::span<const double> c, int k) {
  if (k < 0) throw std::invalid_argument("ma_acf: lag must be >= 0");
  const int q1 = static_cast<int>(c.size());
  double num = 0.0, den = 0.0;
  for (int i = 0; i < q1; ++i) {
    den += c[i] * c[i];
    if (i + k < q1) num += c[i] * c[i + k];
  }
  if (den == 0.0) throw std::invalid_argument("ma_acf: zero coefficients");
  return num / den;
}

GarciaResult garcia_estimate(std::span<const double> y, double delta,
                             const ParamFamily& family) {
  GarciaResult res;
  const int p = family.p;
  const int q_ct = family.q;  // continuous-time MA order of the family

  res.fit = arma_mle(y, p, p - 1);
  if (!res.fit.ok) {
    res.failed = true;
    res.stage = GarciaStage::arma_mle;
    res.message = res.fit.message;
    return res;
  }

  try {
    res.lambda = recover_lambda(res.fit.ar, delta);
  } catch (const std::exception& e) {
    res.failed = true;
    res.stage = GarciaStage::log_root;
    res.message = e.what();
    return res;
  }

  // family-specific mapping from recovered eigenvalues to the AR parameters
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(family.dim);
  switch (family.id) {
    case FamilyId::ou:
      theta[0] = res.lambda[0].real();
      break;
    case FamilyId::carma20: {
      // eigenvalues are {theta, -2}; nearest recovered root plays the fixed -2
      const double d0 = std::abs(res.lambda[0] - std::complex<double>(-2.0, 0.0));
      const double d1 = std::abs(res.lambda[1] - std::complex<double>(-2.0, 0.0));
      const int fixed = d0 <= d1 ? 0 : 1;
      if (std::min(d0, d1) > 0.5) {
        res.failed = true;
        res.stage = GarciaStage::log_root;
        res.message = "recovered eigenvalues miss the fixed root -2 by more than 0.5";
        return res;
      }
      theta[0] = res.lambda[1 - fixed].real();
      break;
    }
    case FamilyId::carma21:
    case FamilyId::generic: {
      // expand prod_j (z - lambda_j) = z^p + a_1 z^{p-1} + ... + a_p
      std::vector<std::complex<double>> coef(static_cast<std::size_t>(p) + 1,
                                             {0.0, 0.0});
      coef[0] = 1.0;
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j >= 1; --j)
          coef[static_cast<std::size_t>(j)] -= res.lambda[static_cast<std::size_t>(i)] *
                                               coef[static_cast<std::size_t>(j - 1)];
      for (int j = 0; j < p; ++j) theta[j] = coef[static_cast<std::size_t>(j + 1)].real();
      break;
    }
  }

  if (q_ct >= 1) {
    // match the filtered-model autocorrelations against the fitted MA part
    std::vector<double> dcoef(static_cast<std::size_t>(p) + 1, 0.0);
    dcoef[0] = 1.0;
    for (int i = 0; i < p; ++i) dcoef[static_cast<std::size_t>(i + 1)] = -res.fit.ar[i];
    std::vector<double> ccoef(static_cast<std::size_t>(p), 0.0);
    ccoef[0] = 1.0;
    for (int i = 0; i + 1 < p; ++i) ccoef[static_cast<std::size_t>(i + 1)] = res.fit.ma[i];

    Box ma_box;
    const int ma_dim = family.dim - family.ar_params;
    ma_box.lo = family.box.lo.tail(ma_dim);
    ma_box.hi = family.box.hi.tail(ma_dim);

    auto objective = [&](const Eigen::VectorXd& theta2) -> double {
      Eigen::VectorXd full = theta;
      full.tail(ma_dim) = theta2;
      try {
        const CarmaSpec spec = family.make(full, delta);
        double acc = 0.0;
        for (int k = 1; k <= q_ct; ++k) {
          const double diff = model_acf(spec, dcoef, k) - ma_acf(ccoef, k);
          acc += diff * diff;
        }
        return acc;
      } catch (const std::exception&) {
        return std::numeric_limits<double>::infinity();
      }
    };

    NelderMeadOptions nm;
    nm.max_iter = 400;
    nm.diam_tol = 1e-9;
    const MultistartResult ms = minimize(objective, ma_box, nm, 1);
    if (!std::isfinite(ms.value)) {
      res.failed = true;
      res.stage = GarciaStage::ma_match;
      res.message = "autocorrelation matching objective not finite";
      return res;
    }
    theta.tail(ma_dim) = ms.x;
  }

  res.theta = theta;
  return res;
}

}  // namespace scarma
