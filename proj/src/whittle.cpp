#include "scarma/whittle.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>

namespace scarma {

double whittle_classical(const Periodogram& per, const TransferArtifacts& art,
                         double sigma_l2) {
  const std::int64_t n = per.n();
  const double sigma_eps2 = sigma_l2 * art.c_omega_c;
  std::vector<double> pi2(per.freqs.size());
  pi_abs2_grid(art, per.freqs, pi2);
  double acc = 0.0;
  for (std::size_t j = 0; j < pi2.size(); ++j) {
    const double f = sigma_eps2 / (2.0 * std::numbers::pi * pi2[j]);
    if (!(f > 0.0) || !std::isfinite(f))
      throw std::runtime_error("whittle_classical: nonpositive spectral density");
    acc += per.values[j] / f + std::log(f);
  }
  return acc / (2.0 * static_cast<double>(n));
}

double whittle_adjusted(const Periodogram& per, const TransferArtifacts& art) {
  const std::int64_t n = per.n();
  std::vector<double> pi2(per.freqs.size());
  pi_abs2_grid(art, per.freqs, pi2);
  double acc = 0.0;
  for (std::size_t j = 0; j < pi2.size(); ++j) acc += pi2[j] * per.values[j];
  return std::numbers::pi / static_cast<double>(n) * acc;
}

double whittle_alpha(const Periodogram& per, const TransferArtifacts& art,
                     double alpha) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("whittle_alpha: alpha must be in (0,2)");
  const double n = static_cast<double>(per.n());
  return std::pow(n, 1.0 - 2.0 / alpha) * whittle_adjusted(per, art);
}

EstimationResult whittle_fit(std::span<const double> y, double delta,
                             const ParamFamily& family,
                             const WhittleFitOptions& opt) {
  EstimationResult out;
  out.n = static_cast<std::int64_t>(y.size());
  if (out.n < 2) {
    out.failure = "series too short";
    out.theta = family.box.center();
    return out;
  }
  const Periodogram per = periodogram(y);

  // the Riccati solve dominates the objective cost and simplex moves revisit
  // vertices, so completed evaluations are memoized by the exact theta bytes
  std::unordered_map<std::string, double> memo;
  std::mutex memo_mtx;

  auto evaluate = [&](const Eigen::VectorXd& theta) -> double {
    try {
      const CarmaSpec spec = family.make(theta, delta);
      if (!validate(spec).pass()) return std::numeric_limits<double>::infinity();
      const TransferArtifacts art = solve_riccati(spec);
      switch (opt.kind) {
        case WhittleKind::classical:
          return whittle_classical(per, art, opt.sigma_l2);
        case WhittleKind::adjusted:
          return whittle_adjusted(per, art);
        case WhittleKind::alpha_scaled:
          return whittle_alpha(per, art, opt.alpha);
      }
      return std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  auto objective = [&](const Eigen::VectorXd& theta) -> double {
    std::string key(reinterpret_cast<const char*>(theta.data()),
                    theta.size() * sizeof(double));
    {
      std::lock_guard<std::mutex> lock(memo_mtx);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    const double v = evaluate(theta);
    std::lock_guard<std::mutex> lock(memo_mtx);
    if (memo.size() > 20000) memo.clear();
    memo.emplace(std::move(key), v);
    return v;
  };

  const MultistartResult ms = minimize(objective, family.box, opt.nm, opt.threads);
  out.theta = ms.x;
  out.objective = ms.value;
  out.converged = ms.converged;
  out.starts_used = ms.starts_used;
  out.failure = ms.failure;
  return out;
}

}  // namespace scarma
