#pragma once

#include <optional>
#include <string>

#include "scarma/kalman.hpp"
#include "scarma/optim.hpp"
#include "scarma/spectral.hpp"

namespace scarma {

// (1/2n) sum_j [ f(w_j)^{-1} I_n(w_j) + log f(w_j) ] with f evaluated through
// the transfer form of the sampled spectral density.
double whittle_classical(const Periodogram& per, const TransferArtifacts& art,
                         double sigma_l2);

// (pi/n) sum_j |Pi(e^{i w_j})|^2 I_n(w_j); free of the driver scale.
double whittle_adjusted(const Periodogram& per, const TransferArtifacts& art);

// (pi/n^{2/alpha}) sum_j |Pi|^2 I_n = n^{1 - 2/alpha} * whittle_adjusted.
double whittle_alpha(const Periodogram& per, const TransferArtifacts& art,
                     double alpha);

enum class WhittleKind { classical, adjusted, alpha_scaled };

struct EstimationResult {
  Eigen::VectorXd theta;
  double objective = 0.0;
  std::int64_t n = 0;
  bool converged = false;
  int starts_used = 0;
  std::string failure;  // empty on success
};

struct WhittleFitOptions {
  WhittleKind kind = WhittleKind::adjusted;
  double alpha = 2.0;     // used by the alpha-scaled objective
  double sigma_l2 = 1.0;  // used by the classical objective
  int threads = 1;
  NelderMeadOptions nm;
};

// Minimizes the chosen Whittle objective over the family box.
EstimationResult whittle_fit(std::span<const double> y, double delta,
                             const ParamFamily& family,
                             const WhittleFitOptions& opt = {});

}  // namespace scarma
