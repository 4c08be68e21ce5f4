#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scarma/carma.hpp"
#include "scarma/stable.hpp"

namespace scarma {

struct SimConfig {
  double step = 0.01;    // Euler step h
  double delta = 1.0;    // sampling distance
  std::int64_t n = 0;    // number of retained observations
  double burn_in = 0.0;  // time discarded before the first retained sample
};

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  double step = 0.0;
  double burn_in = 0.0;
  std::string family;
  std::vector<double> theta;
  double alpha = 0.0;
  double sigma = 0.0;
  std::string method;
};

struct SampledSeries {
  std::vector<double> values;  // Y_delta, ..., Y_{n delta}
  double delta = 1.0;
  Provenance prov;
};

// Euler-Maruyama on the fine grid from X_0 = 0; Y = c^T X recorded every
// delta after the burn-in.
SampledSeries euler_maruyama(const CarmaSpec& spec, const StableParams& noise,
                             const SimConfig& cfg, RngStream& rng);

// Exact state transition e^{A delta} per sampling interval with the
// stochastic integral approximated at the fine-grid midpoints; consumes the
// same number of noise draws per interval as the Euler scheme.
SampledSeries exact_recursion(const CarmaSpec& spec, const StableParams& noise,
                              const SimConfig& cfg, RngStream& rng);

}  // namespace scarma
