#pragma once

#include <functional>
#include <vector>

namespace scarma {

struct QuadRule {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points, nodes by Newton iteration on P_n.
const QuadRule& gauss_legendre(int n);

// Integrate f over [a,b] with an n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n);

// Adaptive Simpson with absolute tolerance; depth-limited.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 40);

}  // namespace scarma
