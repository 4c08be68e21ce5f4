#include "scarma.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "scarma/garcia.hpp"
#include "scarma/kalman.hpp"
#include "scarma/limitlaw.hpp"
#include "scarma/mc.hpp"
#include "scarma/pathsim.hpp"
#include "scarma/spectral.hpp"
#include "scarma/whittle.hpp"

using nlohmann::json;

struct scarma_model {
  scarma::ParamFamily family;
  Eigen::VectorXd theta;
  double delta = 1.0;
  scarma::CarmaSpec spec;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Invalid-argument style exceptions map to SCARMA_EINVAL, everything else to
// SCARMA_ENUMERIC, matching the CLI exit-code contract.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return SCARMA_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SCARMA_EINVAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SCARMA_ENUMERIC;
  }
}

int check_ptr(const void* p, const char* what) {
  if (p != nullptr) return SCARMA_OK;
  set_error(std::string("null pointer: ") + what);
  return SCARMA_EINVAL;
}

}  // namespace

extern "C" {

const char* scarma_version(void) { return "0.1.0"; }

const char* scarma_last_error(void) { return g_last_error.c_str(); }

void scarma_string_free(char* s) { std::free(s); }

int scarma_model_create(const char* family, const double* theta, int dim,
                        double delta, scarma_model** out) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(theta, "theta")) return rc;
  if (int rc = check_ptr(out, "out")) return rc;
  return guarded([&] {
    scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    if (dim != fam.dim)
      throw std::invalid_argument("model_create: theta dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> th(theta, dim);
    auto model = std::make_unique<scarma_model>();
    model->family = fam;
    model->theta = th;
    model->delta = delta;
    model->spec = fam.make(model->theta, delta);  // throws on bad delta
    *out = model.release();
  });
}

void scarma_model_free(scarma_model* model) { delete model; }

int scarma_model_validate(const scarma_model* model, int* pass,
                          char** report_json) {
  if (int rc = check_ptr(model, "model")) return rc;
  if (int rc = check_ptr(pass, "pass")) return rc;
  return guarded([&] {
    const scarma::ValidationReport rep = scarma::validate(model->spec);
    *pass = rep.pass() ? 1 : 0;
    if (report_json != nullptr) {
      json j;
      json ev = json::array();
      for (int i = 0; i < rep.eigenvalues.size(); ++i)
        ev.push_back({rep.eigenvalues[i].real(), rep.eigenvalues[i].imag()});
      j["eigenvalues"] = std::move(ev);
      j["stable"] = rep.stable;
      j["no_cancellation"] = rep.no_cancellation;
      j["sampling_strip"] = rep.sampling_strip;
      j["pass"] = rep.pass();
      *report_json = dup_string(j.dump());
    }
  });
}

int scarma_model_kernel(const scarma_model* model, const double* t, int n,
                        double* g_out) {
  if (int rc = check_ptr(model, "model")) return rc;
  if (int rc = check_ptr(t, "t")) return rc;
  if (int rc = check_ptr(g_out, "g_out")) return rc;
  return guarded([&] {
    for (int i = 0; i < n; ++i) g_out[i] = scarma::kernel(model->spec, t[i]);
  });
}

int scarma_simulate(const scarma_model* model, double alpha, double sigma,
                    double step, double burn_in, int method, int64_t n,
                    uint64_t seed, uint64_t stream_id, double* y_out) {
  if (int rc = check_ptr(model, "model")) return rc;
  if (int rc = check_ptr(y_out, "y_out")) return rc;
  return guarded([&] {
    scarma::StableParams noise;
    noise.alpha = alpha;
    noise.sigma = sigma;
    scarma::SimConfig cfg;
    cfg.step = step;
    cfg.delta = model->delta;
    cfg.n = n;
    cfg.burn_in = burn_in;
    scarma::RngStream rng(seed, stream_id);
    const scarma::SampledSeries series =
        method == 1 ? scarma::exact_recursion(model->spec, noise, cfg, rng)
                    : scarma::euler_maruyama(model->spec, noise, cfg, rng);
    std::memcpy(y_out, series.values.data(), sizeof(double) * series.values.size());
  });
}

int scarma_periodogram(const double* y, int64_t n, double* omega_out,
                       double* i_out) {
  if (int rc = check_ptr(y, "y")) return rc;
  if (int rc = check_ptr(omega_out, "omega_out")) return rc;
  if (int rc = check_ptr(i_out, "i_out")) return rc;
  return guarded([&] {
    const scarma::Periodogram per =
        scarma::periodogram(std::span<const double>(y, static_cast<std::size_t>(n)));
    std::memcpy(omega_out, per.freqs.data(), sizeof(double) * per.freqs.size());
    std::memcpy(i_out, per.values.data(), sizeof(double) * per.values.size());
  });
}

int scarma_acvf(const double* y, int64_t n, int64_t lag, double* gamma_out) {
  if (int rc = check_ptr(y, "y")) return rc;
  if (int rc = check_ptr(gamma_out, "gamma_out")) return rc;
  return guarded([&] {
    *gamma_out = scarma::sample_acvf(
        std::span<const double>(y, static_cast<std::size_t>(n)), lag);
  });
}

int scarma_spectrum(const scarma_model* model, double sigma_l2,
                    const double* omega, int n_omega, double* f_integral,
                    double* f_transfer) {
  if (int rc = check_ptr(model, "model")) return rc;
  if (int rc = check_ptr(omega, "omega")) return rc;
  if (int rc = check_ptr(f_integral, "f_integral")) return rc;
  if (int rc = check_ptr(f_transfer, "f_transfer")) return rc;
  return guarded([&] {
    const scarma::TransferArtifacts art = scarma::solve_riccati(model->spec);
    const scarma::SpectralDensity sd(model->spec, art, sigma_l2);
    for (int i = 0; i < n_omega; ++i) {
      f_integral[i] = sd.integral_form(omega[i]);
      f_transfer[i] = sd.transfer_form(omega[i]);
    }
  });
}

int scarma_whittle_fit(const char* family, double delta, int objective,
                       double alpha, double sigma_l2, const double* y,
                       int64_t n, char** result_json) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(y, "y")) return rc;
  if (int rc = check_ptr(result_json, "result_json")) return rc;
  return guarded([&] {
    const scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    scarma::WhittleFitOptions opt;
    switch (objective) {
      case 0: opt.kind = scarma::WhittleKind::adjusted; break;
      case 1: opt.kind = scarma::WhittleKind::alpha_scaled; break;
      case 2: opt.kind = scarma::WhittleKind::classical; break;
      default: throw std::invalid_argument("whittle_fit: unknown objective");
    }
    opt.alpha = alpha;
    opt.sigma_l2 = sigma_l2;
    const scarma::EstimationResult est = scarma::whittle_fit(
        std::span<const double>(y, static_cast<std::size_t>(n)), delta, fam, opt);
    json j;
    j["theta"] = std::vector<double>(est.theta.data(), est.theta.data() + est.theta.size());
    j["objective"] = est.objective;
    j["n"] = est.n;
    j["converged"] = est.converged;
    j["starts_used"] = est.starts_used;
    j["failure"] = est.failure;
    *result_json = dup_string(j.dump());
  });
}

int scarma_garcia_fit(const char* family, double delta, const double* y,
                      int64_t n, char** result_json) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(y, "y")) return rc;
  if (int rc = check_ptr(result_json, "result_json")) return rc;
  return guarded([&] {
    const scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    const scarma::GarciaResult est = scarma::garcia_estimate(
        std::span<const double>(y, static_cast<std::size_t>(n)), delta, fam);
    json j;
    if (est.failed) {
      j["theta"] = json::array();
    } else {
      j["theta"] =
          std::vector<double>(est.theta.data(), est.theta.data() + est.theta.size());
    }
    json lam = json::array();
    for (const auto& l : est.lambda) lam.push_back({l.real(), l.imag()});
    j["lambda"] = std::move(lam);
    j["failed"] = est.failed;
    j["failure_stage"] = scarma::to_string(est.stage);
    j["message"] = est.message;
    *result_json = dup_string(j.dump());
  });
}

int scarma_beta_diag(const char* family, double delta, const double* theta,
                     const double* theta0, int dim, double alpha, double* beta,
                     double* beta_plus, double* beta_minus,
                     double* sigma_scale) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(theta, "theta")) return rc;
  if (int rc = check_ptr(theta0, "theta0")) return rc;
  return guarded([&] {
    const scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    if (dim != fam.dim)
      throw std::invalid_argument("beta_diag: theta dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> th(theta, dim), th0(theta0, dim);
    const scarma::BetaDiagnostic d = scarma::beta_diag(fam, th, th0, delta, alpha);
    if (beta) *beta = d.beta;
    if (beta_plus) *beta_plus = d.beta_plus;
    if (beta_minus) *beta_minus = d.beta_minus;
    if (sigma_scale) *sigma_scale = d.sigma_scale;
  });
}

int scarma_beta_grid(const char* family, double delta, const double* theta0,
                     int dim, double alpha, int coord, double lo, double hi,
                     int points, char** csv_out) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(theta0, "theta0")) return rc;
  if (int rc = check_ptr(csv_out, "csv_out")) return rc;
  return guarded([&] {
    const scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    if (dim != fam.dim)
      throw std::invalid_argument("beta_grid: theta0 dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> th0(theta0, dim);
    const auto rows = scarma::beta_grid(fam, th0, delta, alpha, coord, lo, hi, points);
    std::string csv = "theta,beta,beta_plus,beta_minus\n";
    char buf[200];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.coord_value,
                    r.beta, r.beta_plus, r.beta_minus);
      csv += buf;
    }
    *csv_out = dup_string(csv);
  });
}

int scarma_limit_sim(const char* family, double delta, const double* theta0,
                     int dim, const double* grid, int grid_len, double alpha,
                     double sigma, int reps, uint64_t seed, char** csv_out) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(theta0, "theta0")) return rc;
  if (int rc = check_ptr(grid, "grid")) return rc;
  if (int rc = check_ptr(csv_out, "csv_out")) return rc;
  return guarded([&] {
    const scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    if (dim != fam.dim)
      throw std::invalid_argument("limit_sim: theta0 dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> th0(theta0, dim);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(grid_len));
    for (int i = 0; i < grid_len; ++i)
      pts.emplace_back(Eigen::Map<const Eigen::VectorXd>(grid + i * dim, dim));
    scarma::RngStream rng(seed, 0);
    const Eigen::MatrixXd draws =
        scarma::simulate_limit_w(fam, pts, th0, delta, alpha, sigma, reps, rng);
    std::string csv;
    char buf[64];
    for (int j = 0; j < grid_len; ++j) {
      csv += j == 0 ? "w" : ",w";
      csv += std::to_string(j);
    }
    csv += "\n";
    for (int r = 0; r < draws.rows(); ++r) {
      for (int j = 0; j < draws.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), j == 0 ? "%.17g" : ",%.17g", draws(r, j));
        csv += buf;
      }
      csv += "\n";
    }
    *csv_out = dup_string(csv);
  });
}

int scarma_acvf_limit(const char* family, double delta, const double* theta0,
                      int dim, double alpha, double sigma, int lag,
                      double* scale, double* skew) {
  if (int rc = check_ptr(family, "family")) return rc;
  if (int rc = check_ptr(theta0, "theta0")) return rc;
  return guarded([&] {
    const scarma::ParamFamily fam = scarma::ParamFamily::by_name(family);
    if (dim != fam.dim)
      throw std::invalid_argument("acvf_limit: theta0 dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> th0(theta0, dim);
    const scarma::StableLimitParams params =
        scarma::acvf_limit_params(fam, th0, delta, alpha, sigma, lag);
    if (scale) *scale = params.scale;
    if (skew) *skew = params.skew;
  });
}

int scarma_experiment_run(const char* config_json, char** report_json,
                          char** summary_csv) {
  if (int rc = check_ptr(config_json, "config_json")) return rc;
  return guarded([&] {
    scarma::ExperimentConfig cfg;
    try {
      cfg = scarma::ExperimentConfig::from_json(config_json);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("experiment config: ") + e.what());
    }
    const scarma::ExperimentReport report = scarma::run_experiment(cfg);
    if (report_json) *report_json = dup_string(report.to_json());
    if (summary_csv) *summary_csv = dup_string(report.summary_csv());
  });
}

}  // extern "C"
