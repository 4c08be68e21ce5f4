#include "scarma/carma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>
#include <unsupported/Eigen/Polynomials>

namespace scarma {

Eigen::VectorXd CarmaSpec::c_vec() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p());
  c.head(ma.size()) = ma;
  return c;
}

void CarmaSpec::check() const {
  if (ar.size() < 1) throw std::invalid_argument("carma: need p >= 1");
  if (ar[ar.size() - 1] == 0.0)
    throw std::invalid_argument("carma: a_p must be nonzero");
  if (ma.size() < 1 || ma.size() > ar.size())
    throw std::invalid_argument("carma: need 1 <= q+1 <= p MA coefficients");
  if (ma.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("carma: MA polynomial must be nonzero");
  if (!(delta > 0.0)) throw std::invalid_argument("carma: delta must be > 0");
}

Eigen::MatrixXd companion(const Eigen::VectorXd& ar) {
  const int p = static_cast<int>(ar.size());
  if (p < 1) throw std::invalid_argument("companion: empty coefficient vector");
  if (ar[p - 1] == 0.0) throw std::invalid_argument("companion: a_p must be nonzero");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i + 1 < p; ++i) a(i, i + 1) = 1.0;
  for (int j = 0; j < p; ++j) a(p - 1, j) = -ar[p - 1 - j];
  return a;
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a, double t) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp: square matrix required");
  return (a * t).exp();
}

double kernel(const CarmaSpec& spec, double t) {
  spec.check();
  if (t < 0.0) return 0.0;
  const Eigen::MatrixXd a = companion(spec.ar);
  const Eigen::MatrixXd e = matrix_exp(a, t);
  return spec.c_vec().dot(e.col(spec.p() - 1));
}

double carma21_kernel_closed_form(const Eigen::Vector3d& theta, double t) {
  const double disc = theta[0] * theta[0] - 4.0 * theta[1];
  if (!(disc > 0.0))
    throw std::invalid_argument(
        "carma21 closed form requires distinct real roots (theta1^2 > 4 theta2)");
  if (t < 0.0) return 0.0;
  const double root = std::sqrt(disc);
  const double lam_p = 0.5 * (theta[0] + root);
  const double lam_m = 0.5 * (theta[0] - root);
  return (lam_p - theta[2]) / root * std::exp(-lam_p * t) +
         (theta[2] - lam_m) / root * std::exp(-lam_m * t);
}

ValidationReport validate(const CarmaSpec& spec) {
  spec.check();
  ValidationReport rep;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion(spec.ar));
  rep.eigenvalues = es.eigenvalues();

  rep.stable = true;
  rep.sampling_strip = true;
  const double strip = std::numbers::pi / spec.delta;
  for (int i = 0; i < rep.eigenvalues.size(); ++i) {
    if (!(rep.eigenvalues[i].real() < 0.0)) rep.stable = false;
    if (!(std::abs(rep.eigenvalues[i].imag()) < strip)) rep.sampling_strip = false;
  }

  rep.no_cancellation = true;
  if (spec.q() >= 1) {
    Eigen::PolynomialSolver<double, Eigen::Dynamic> ps;
    ps.compute(spec.ma);
    for (const auto& root : ps.roots()) {
      for (int i = 0; i < rep.eigenvalues.size(); ++i) {
        if (std::abs(root - rep.eigenvalues[i]) <= 1e-10) rep.no_cancellation = false;
      }
    }
  }
  return rep;
}

Eigen::VectorXd Box::project(Eigen::VectorXd x) const {
  for (int i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

bool Box::contains(const Eigen::VectorXd& x, double slack) const {
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
  return true;
}

namespace {
Box make_box(std::initializer_list<std::pair<double, double>> iv) {
  Box b;
  b.lo.resize(static_cast<int>(iv.size()));
  b.hi.resize(static_cast<int>(iv.size()));
  int i = 0;
  for (auto [l, h] : iv) {
    b.lo[i] = l;
    b.hi[i] = h;
    ++i;
  }
  return b;
}
}  // namespace

CarmaSpec ParamFamily::make(const Eigen::VectorXd& theta, double delta) const {
  if (theta.size() != dim)
    throw std::invalid_argument("family " + name + ": parameter dimension mismatch");
  CarmaSpec spec;
  spec.delta = delta;
  switch (id) {
    case FamilyId::ou:
      spec.ar = Eigen::VectorXd::Constant(1, -theta[0]);
      spec.ma = Eigen::VectorXd::Ones(1);
      break;
    case FamilyId::carma20:
      spec.ar = Eigen::VectorXd(2);
      spec.ar << 2.0 - theta[0], -2.0 * theta[0];
      spec.ma = Eigen::VectorXd::Constant(1, theta[0] - 2.0);
      break;
    case FamilyId::carma21:
      spec.ar = Eigen::VectorXd(2);
      spec.ar << theta[0], theta[1];
      spec.ma = Eigen::VectorXd(2);
      spec.ma << theta[2], 1.0;
      break;
    case FamilyId::generic: {
      spec.ar = theta.head(p);
      spec.ma = Eigen::VectorXd::Zero(q + 1);
      spec.ma[q] = 1.0;
      for (int j = 0; j < q; ++j) spec.ma[j] = theta[p + j];
      break;
    }
  }
  return spec;
}

ParamFamily ParamFamily::ou() {
  ParamFamily f;
  f.id = FamilyId::ou;
  f.name = "ou";
  f.dim = 1;
  f.p = 1;
  f.q = 0;
  f.ar_params = 1;
  f.box = make_box({{-5.0, -0.05}});
  return f;
}

ParamFamily ParamFamily::carma20() {
  ParamFamily f;
  f.id = FamilyId::carma20;
  f.name = "carma20";
  f.dim = 1;
  f.p = 2;
  f.q = 0;
  f.ar_params = 1;
  f.box = make_box({{-10.0, -0.1}});
  return f;
}

ParamFamily ParamFamily::carma21() {
  ParamFamily f;
  f.id = FamilyId::carma21;
  f.name = "carma21";
  f.dim = 3;
  f.p = 2;
  f.q = 1;
  f.ar_params = 2;
  f.box = make_box({{0.1, 5.0}, {0.005, 2.0}, {0.01, 2.0}});
  return f;
}

ParamFamily ParamFamily::generic(int p, int q, const Box& box) {
  if (p < 1 || q < 0 || q >= p)
    throw std::invalid_argument("generic family: need p >= 1 and 0 <= q < p");
  ParamFamily f;
  f.id = FamilyId::generic;
  f.name = "generic";
  f.p = p;
  f.q = q;
  f.dim = p + q;
  f.ar_params = p;
  if (box.dim() != f.dim)
    throw std::invalid_argument("generic family: box dimension mismatch");
  f.box = box;
  return f;
}

ParamFamily ParamFamily::by_name(const std::string& name) {
  if (name == "ou" || name == "OU") return ou();
  if (name == "carma20" || name == "CARMA20") return carma20();
  if (name == "carma21" || name == "CARMA21") return carma21();
  throw std::invalid_argument("unknown family: " + name);
}

}  // namespace scarma
