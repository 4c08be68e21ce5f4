#pragma once

#include <Eigen/Dense>
#include <string>

namespace scarma {

// CARMA(p,q) specification in controller canonical form. `ar` holds the
// autoregressive coefficients a_1..a_p of a(z) = z^p + a_1 z^{p-1} + ... + a_p;
// `ma` holds the moving-average coefficients in ascending powers, so the MA
// polynomial is ma[0] + ma[1] z + ... + ma[q] z^q and the state-space output
// vector is c = (ma[0], ..., ma[q], 0, ..., 0).
struct CarmaSpec {
  Eigen::VectorXd ar;
  Eigen::VectorXd ma;
  double delta = 1.0;

  int p() const { return static_cast<int>(ar.size()); }
  int q() const { return static_cast<int>(ma.size()) - 1; }
  Eigen::VectorXd c_vec() const;
  void check() const;  // throws std::invalid_argument
};

// Companion matrix: ones on the superdiagonal, last row (-a_p, ..., -a_1).
Eigen::MatrixXd companion(const Eigen::VectorXd& ar);

// e^{A t} by scaling-and-squaring with a Pade approximant.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a, double t);

// Kernel g(t) = c^T e^{A t} e_p for t >= 0, zero for t < 0.
double kernel(const CarmaSpec& spec, double t);

// Two-exponential closed form of the CARMA(2,1) family kernel; requires
// distinct real characteristic roots (theta1^2 > 4 theta2).
double carma21_kernel_closed_form(const Eigen::Vector3d& theta, double t);

struct ValidationReport {
  Eigen::VectorXcd eigenvalues;
  bool stable = false;          // all eigenvalues have negative real part
  bool no_cancellation = false; // MA zeros away from the eigenvalues
  bool sampling_strip = false;  // |Im(eigenvalue)| < pi / delta
  bool pass() const { return stable && no_cancellation && sampling_strip; }
};

ValidationReport validate(const CarmaSpec& spec);

struct Box {
  Eigen::VectorXd lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
  Eigen::VectorXd project(Eigen::VectorXd x) const;
  bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;
};

enum class FamilyId { ou, carma20, carma21, generic };

// Parametric model family: maps a parameter vector onto a CarmaSpec and
// carries the compact search box used by the estimators.
struct ParamFamily {
  FamilyId id = FamilyId::ou;
  std::string name;
  int dim = 1;
  int p = 1;         // AR order of every member
  int q = 0;         // MA order of every member
  int ar_params = 1; // leading theta coordinates that determine the AR part
  Box box;

  CarmaSpec make(const Eigen::VectorXd& theta, double delta = 1.0) const;

  static ParamFamily ou();
  static ParamFamily carma20();
  static ParamFamily carma21();
  // p params for a_1..a_p, then q params for the MA polynomial
  // m(z) = theta_{p+1} + ... + theta_{p+q} z^{q-1} + z^q (monic; c = (1) if q=0).
  static ParamFamily generic(int p, int q, const Box& box);
  static ParamFamily by_name(const std::string& name);  // "ou","carma20","carma21"
};

}  // namespace scarma
