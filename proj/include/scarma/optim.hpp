#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "scarma/carma.hpp"

namespace scarma {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
  int max_iter = 500;
  double diam_tol = 1e-8;
  double init_step_frac = 0.10;  // initial simplex edge as a box-width fraction
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  bool improved = false;  // strictly beat the value at its own start point
  int iterations = 0;
};

// Nelder-Mead with every trial point projected into the box. Non-finite
// objective values are treated as +inf.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const Box& box, const NelderMeadOptions& opt = {});

struct MultistartResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int starts_used = 0;
  std::string failure;
};

// Start points: the box center plus a 3^d grid at the quartile points of each
// coordinate, subsampled deterministically to at most 11 starts in total.
std::vector<Eigen::VectorXd> multistart_points(const Box& box);

// Runs Nelder-Mead from every start; the winner is the lowest value with
// lexicographically smallest x as the tie-break, so the result does not
// depend on evaluation order.
MultistartResult minimize(const Objective& f, const Box& box,
                          const NelderMeadOptions& opt = {}, int threads = 1);

}  // namespace scarma
