#include "scarma/pathsim.hpp"

#include <cmath>
#include <stdexcept>

namespace scarma {

namespace {

std::int64_t checked_ratio(double whole, double step, const char* what) {
  const double ratio = whole / step;
  const double rounded = std::round(ratio);
  if (!(rounded >= 0.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument(std::string("pathsim: ") + what +
                                " must be a nonnegative integer multiple of step");
  return static_cast<std::int64_t>(rounded);
}

void check_inputs(const CarmaSpec& spec, const StableParams& noise,
                  const SimConfig& cfg) {
  spec.check();
  noise.check();
  if (!noise.symmetric())
    throw std::invalid_argument("pathsim: driving noise must be symmetric (beta = mu = 0)");
  if (!validate(spec).pass())
    throw std::invalid_argument("pathsim: model fails validation");
  if (cfg.n < 1) throw std::invalid_argument("pathsim: n must be >= 1");
  if (!(cfg.step > 0.0)) throw std::invalid_argument("pathsim: step must be > 0");
  if (cfg.delta != spec.delta)
    throw std::invalid_argument("pathsim: cfg.delta must match spec.delta");
}

Provenance make_prov(const CarmaSpec& spec, const StableParams& noise,
                     const SimConfig& cfg, const RngStream& rng,
                     const char* method) {
  Provenance prov;
  prov.seed = rng.seed();
  prov.stream_id = rng.stream_id();
  prov.step = cfg.step;
  prov.burn_in = cfg.burn_in;
  prov.theta.assign(spec.ar.data(), spec.ar.data() + spec.ar.size());
  for (int i = 0; i < spec.ma.size(); ++i) prov.theta.push_back(spec.ma[i]);
  prov.alpha = noise.alpha;
  prov.sigma = noise.sigma;
  prov.method = method;
  return prov;
}

}  // namespace

SampledSeries euler_maruyama(const CarmaSpec& spec, const StableParams& noise,
                             const SimConfig& cfg, RngStream& rng) {
  check_inputs(spec, noise, cfg);
  const std::int64_t m = checked_ratio(cfg.delta, cfg.step, "delta");
  if (m < 1) throw std::invalid_argument("pathsim: delta/step must be >= 1");
  const std::int64_t burn_steps = checked_ratio(cfg.burn_in, cfg.step, "burn_in");

  const int p = spec.p();
  const Eigen::MatrixXd ah =
      Eigen::MatrixXd::Identity(p, p) + cfg.step * companion(spec.ar);
  const Eigen::VectorXd c = spec.c_vec();
  StableParams inc = noise;
  inc.sigma = noise.sigma * std::pow(cfg.step, 1.0 / noise.alpha);

  SampledSeries out;
  out.delta = cfg.delta;
  out.values.reserve(static_cast<std::size_t>(cfg.n));
  out.prov = make_prov(spec, noise, cfg, rng, "euler");

  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd tmp(p);
  for (std::int64_t k = 0; k < burn_steps; ++k) {
    tmp.noalias() = ah * x;
    x = tmp;
    x[p - 1] += sample(inc, rng);
  }
  for (std::int64_t i = 0; i < cfg.n; ++i) {
    for (std::int64_t k = 0; k < m; ++k) {
      tmp.noalias() = ah * x;
      x = tmp;
      x[p - 1] += sample(inc, rng);
    }
    const double y = c.dot(x);
    if (!std::isfinite(y))
      throw std::runtime_error(
          "euler_maruyama: state blew up at observation " + std::to_string(i + 1) +
          " (theta too close to instability for this step size?)");
    out.values.push_back(y);
  }
  return out;
}

SampledSeries exact_recursion(const CarmaSpec& spec, const StableParams& noise,
                              const SimConfig& cfg, RngStream& rng) {
  check_inputs(spec, noise, cfg);
  const std::int64_t m = checked_ratio(cfg.delta, cfg.step, "delta");
  if (m < 1) throw std::invalid_argument("pathsim: delta/step must be >= 1");
  const std::int64_t burn_steps = checked_ratio(cfg.burn_in, cfg.step, "burn_in");
  if (burn_steps % m != 0)
    throw std::invalid_argument("pathsim: burn_in must be a multiple of delta here");

  const int p = spec.p();
  const Eigen::MatrixXd a = companion(spec.ar);
  const Eigen::MatrixXd phi = matrix_exp(a, cfg.delta);
  const Eigen::VectorXd c = spec.c_vec();

  // e^{A (delta - s_i)} e_p at the fine-grid midpoints s_i = (i - 1/2) h
  std::vector<Eigen::VectorXd> prop(static_cast<std::size_t>(m));
  for (std::int64_t i = 1; i <= m; ++i) {
    const double s = (static_cast<double>(i) - 0.5) * cfg.step;
    prop[static_cast<std::size_t>(i - 1)] =
        matrix_exp(a, cfg.delta - s).col(p - 1);
  }

  StableParams inc = noise;
  inc.sigma = noise.sigma * std::pow(cfg.step, 1.0 / noise.alpha);

  SampledSeries out;
  out.delta = cfg.delta;
  out.values.reserve(static_cast<std::size_t>(cfg.n));
  out.prov = make_prov(spec, noise, cfg, rng, "exact");

  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd tmp(p);
  const std::int64_t total = burn_steps / m + cfg.n;
  for (std::int64_t block = 0; block < total; ++block) {
    tmp.noalias() = phi * x;
    x = tmp;
    for (std::int64_t i = 0; i < m; ++i)
      x += prop[static_cast<std::size_t>(i)] * sample(inc, rng);
    if (block >= burn_steps / m) {
      const double y = c.dot(x);
      if (!std::isfinite(y))
        throw std::runtime_error("exact_recursion: non-finite observation");
      out.values.push_back(y);
    }
  }
  return out;
}

}  // namespace scarma
