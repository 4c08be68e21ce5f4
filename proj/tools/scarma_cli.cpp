// Command-line frontend for the stable-CARMA library. All numerical work goes
// through the shared-library C API; this file only parses arguments and moves
// CSV/JSON around.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scarma.h"

namespace {

using nlohmann::json;

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "scarma: " << msg << "\n";
  std::exit(code);
}

int check(int rc) {
  if (rc != SCARMA_OK) die(rc, scarma_last_error());
  return rc;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) die(kExitInvalid, "cannot open output file " + path);
  out << content;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitInvalid, "cannot open input file " + path);
  std::vector<double> y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.empty()) continue;
    const std::string& value = fields.size() >= 2 ? fields[1] : fields[0];
    try {
      y.push_back(std::stod(value));
    } catch (...) {
      continue;  // header or stray text
    }
  }
  if (y.empty()) die(kExitInvalid, "no numeric observations in " + path);
  return y;
}

struct ModelArgs {
  std::string family = "ou";
  std::vector<double> theta;
  double delta = 1.0;
};

scarma_model* make_model(const ModelArgs& args) {
  scarma_model* model = nullptr;
  check(scarma_model_create(args.family.c_str(), args.theta.data(),
                            static_cast<int>(args.theta.size()), args.delta,
                            &model));
  return model;
}

std::vector<std::vector<double>> parse_grid(const std::string& text) {
  std::vector<std::vector<double>> grid;
  std::stringstream outer(text);
  std::string chunk;
  while (std::getline(outer, chunk, ';')) {
    if (chunk.empty()) continue;
    std::vector<double> v;
    std::stringstream inner(chunk);
    std::string field;
    while (std::getline(inner, field, ',')) v.push_back(std::stod(field));
    if (!v.empty()) grid.push_back(std::move(v));
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation, spectral estimation and consistency diagnostics "
               "for stable CARMA processes"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;
  int threads = 0;
  std::string config_path;
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_path, "output path (default stdout)");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--config", config_path, "experiment config JSON file");

  // ------------------------------------------------------------- simulate
  auto* sim = app.add_subcommand("simulate", "simulate a sampled stable CARMA path");
  ModelArgs sim_model;
  double sim_alpha = 1.5, sim_sigma = 1.0, sim_step = 0.01, sim_burn = 0.0;
  std::int64_t sim_n = 1000;
  std::uint64_t sim_stream = 0;
  std::string sim_method = "euler";
  sim->add_option("--family", sim_model.family, "ou | carma20 | carma21");
  sim->add_option("--theta", sim_model.theta, "model parameters")->expected(-1);
  sim->add_option("--delta", sim_model.delta, "sampling distance");
  sim->add_option("--alpha", sim_alpha, "stability index of the driver");
  sim->add_option("--sigma", sim_sigma, "scale of the driver");
  sim->add_option("--step", sim_step, "Euler step");
  sim->add_option("--burn-in", sim_burn, "time discarded before sampling");
  sim->add_option("--n", sim_n, "number of observations");
  sim->add_option("--stream", sim_stream, "replication stream id");
  sim->add_option("--method", sim_method, "euler | exact");

  // ----------------------------------------------------- acvf, periodogram
  auto* acvf = app.add_subcommand("acvf", "sample autocovariances of a series CSV");
  std::string acvf_in;
  std::int64_t acvf_maxlag = 20;
  acvf->add_option("--in", acvf_in, "input CSV (k,y)")->required();
  acvf->add_option("--max-lag", acvf_maxlag, "largest lag");

  auto* per = app.add_subcommand("periodogram", "periodogram of a series CSV");
  std::string per_in;
  per->add_option("--in", per_in, "input CSV (k,y)")->required();

  // --------------------------------------------------------------- spectrum
  auto* spec_cmd = app.add_subcommand("spectrum", "sampled spectral density, both forms");
  ModelArgs spec_model;
  double spec_sigma_l2 = 1.0;
  int spec_points = 128;
  spec_cmd->add_option("--family", spec_model.family, "ou | carma20 | carma21");
  spec_cmd->add_option("--theta", spec_model.theta, "model parameters")->expected(-1);
  spec_cmd->add_option("--delta", spec_model.delta, "sampling distance");
  spec_cmd->add_option("--sigma-l2", spec_sigma_l2, "variance of the driver");
  spec_cmd->add_option("--points", spec_points, "frequency count");

  // ------------------------------------------------------------ whittle-fit
  auto* wfit = app.add_subcommand("whittle-fit", "Whittle estimate from a series CSV");
  std::string wfit_in, wfit_family = "ou", wfit_objective = "auto";
  double wfit_alpha = 1.5, wfit_delta = 1.0, wfit_sigma_l2 = 1.0;
  wfit->add_option("--in", wfit_in, "input CSV (k,y)")->required();
  wfit->add_option("--family", wfit_family, "ou | carma20 | carma21");
  wfit->add_option("--alpha", wfit_alpha, "stability index");
  wfit->add_option("--delta", wfit_delta, "sampling distance");
  wfit->add_option("--sigma-l2", wfit_sigma_l2, "driver variance (classical objective)");
  wfit->add_option("--objective", wfit_objective, "auto | adjusted | alpha | classical");

  // ------------------------------------------------------------- garcia-fit
  auto* gfit = app.add_subcommand("garcia-fit", "indirect ARMA-based estimate");
  std::string gfit_in, gfit_family = "ou";
  double gfit_delta = 1.0;
  gfit->add_option("--in", gfit_in, "input CSV (k,y)")->required();
  gfit->add_option("--family", gfit_family, "ou | carma20 | carma21");
  gfit->add_option("--delta", gfit_delta, "sampling distance");

  // -------------------------------------------------------------- beta-grid
  auto* bgrid = app.add_subcommand("beta-grid", "skewness diagnostics along one coordinate");
  std::string bg_family = "carma20";
  std::vector<double> bg_theta0;
  double bg_alpha = 1.5, bg_delta = 1.0, bg_from = 0.0, bg_to = 0.0;
  int bg_coord = 0, bg_points = 41;
  bgrid->add_option("--family", bg_family, "ou | carma20 | carma21");
  bgrid->add_option("--theta0", bg_theta0, "true parameter")->expected(-1)->required();
  bgrid->add_option("--alpha", bg_alpha, "stability index");
  bgrid->add_option("--delta", bg_delta, "sampling distance");
  bgrid->add_option("--coord", bg_coord, "swept coordinate (0-based)");
  bgrid->add_option("--from", bg_from, "sweep start")->required();
  bgrid->add_option("--to", bg_to, "sweep end")->required();
  bgrid->add_option("--points", bg_points, "sweep points");

  // -------------------------------------------------------------- limit-sim
  auto* lsim = app.add_subcommand("limit-sim", "draws of the limiting Whittle functional");
  std::string ls_family = "ou", ls_grid_text;
  std::vector<double> ls_theta0;
  double ls_alpha = 1.5, ls_delta = 1.0, ls_sigma = 1.0;
  int ls_reps = 1000;
  lsim->add_option("--family", ls_family, "ou | carma20 | carma21");
  lsim->add_option("--theta0", ls_theta0, "true parameter")->expected(-1)->required();
  lsim->add_option("--grid", ls_grid_text,
                   "evaluation points, vectors ; separated, components , separated")
      ->required();
  lsim->add_option("--alpha", ls_alpha, "stability index");
  lsim->add_option("--delta", ls_delta, "sampling distance");
  lsim->add_option("--sigma", ls_sigma, "driver scale");
  lsim->add_option("--reps", ls_reps, "replications");

  // ------------------------------------------------------------- acvf-limit
  auto* alim = app.add_subcommand("acvf-limit", "stable parameters of the autocovariance limit");
  std::string al_family = "ou";
  std::vector<double> al_theta0;
  double al_alpha = 1.5, al_delta = 1.0, al_sigma = 1.0;
  int al_lag = 0;
  alim->add_option("--family", al_family, "ou | carma20 | carma21");
  alim->add_option("--theta0", al_theta0, "true parameter")->expected(-1)->required();
  alim->add_option("--alpha", al_alpha, "stability index");
  alim->add_option("--delta", al_delta, "sampling distance");
  alim->add_option("--sigma", al_sigma, "driver scale");
  alim->add_option("--lag", al_lag, "autocovariance lag");

  // ------------------------------------------------------------- experiment
  auto* expr = app.add_subcommand("experiment", "Monte Carlo estimator comparison");
  std::string ex_family;
  std::vector<double> ex_theta0;
  double ex_alpha = -1.0, ex_sigma = -1.0, ex_delta = -1.0, ex_step = -1.0,
         ex_burn = -1.0;
  std::vector<std::int64_t> ex_nlist;
  int ex_reps = -1;
  std::vector<std::string> ex_estimators;
  std::string ex_method;
  expr->add_option("--family", ex_family, "ou | carma20 | carma21");
  expr->add_option("--theta0", ex_theta0, "true parameter")->expected(-1);
  expr->add_option("--alpha", ex_alpha, "stability index");
  expr->add_option("--sigma", ex_sigma, "driver scale");
  expr->add_option("--delta", ex_delta, "sampling distance");
  expr->add_option("--n-list", ex_nlist, "sample sizes")->expected(-1);
  expr->add_option("--replications", ex_reps, "Monte Carlo replications");
  expr->add_option("--estimators", ex_estimators, "whittle garcia")->expected(-1);
  expr->add_option("--sim-step", ex_step, "Euler step");
  expr->add_option("--burn-in", ex_burn, "simulation burn-in time");
  expr->add_option("--method", ex_method, "euler | exact");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "scarma: " << e.what() << "\n";
    return kExitInvalid;
  }

  if (sim->parsed()) {
    if (sim_model.theta.empty()) die(kExitInvalid, "simulate: --theta is required");
    scarma_model* model = make_model(sim_model);
    std::vector<double> y(static_cast<std::size_t>(sim_n));
    check(scarma_simulate(model, sim_alpha, sim_sigma, sim_step, sim_burn,
                          sim_method == "exact" ? 1 : 0, sim_n, seed, sim_stream,
                          y.data()));
    scarma_model_free(model);
    std::string csv = "# family=" + sim_model.family + " theta=";
    for (std::size_t i = 0; i < sim_model.theta.size(); ++i)
      csv += (i ? "," : "") + format_double(sim_model.theta[i]);
    csv += " delta=" + format_double(sim_model.delta) +
           " alpha=" + format_double(sim_alpha) +
           " sigma=" + format_double(sim_sigma) +
           " step=" + format_double(sim_step) +
           " burn_in=" + format_double(sim_burn) + " method=" + sim_method +
           " seed=" + std::to_string(seed) +
           " stream=" + std::to_string(sim_stream) + "\n";
    csv += "k,y\n";
    for (std::int64_t k = 0; k < sim_n; ++k)
      csv += std::to_string(k + 1) + "," +
             format_double(y[static_cast<std::size_t>(k)]) + "\n";
    write_output(out_path, csv);
    return 0;
  }

  if (acvf->parsed()) {
    const std::vector<double> y = read_series_csv(acvf_in);
    if (acvf_maxlag >= static_cast<std::int64_t>(y.size()))
      acvf_maxlag = static_cast<std::int64_t>(y.size()) - 1;
    std::string csv = "h,gamma\n";
    for (std::int64_t h = 0; h <= acvf_maxlag; ++h) {
      double g = 0.0;
      check(scarma_acvf(y.data(), static_cast<std::int64_t>(y.size()), h, &g));
      csv += std::to_string(h) + "," + format_double(g) + "\n";
    }
    write_output(out_path, csv);
    return 0;
  }

  if (per->parsed()) {
    const std::vector<double> y = read_series_csv(per_in);
    const std::size_t m = 2 * y.size();
    std::vector<double> omega(m), values(m);
    check(scarma_periodogram(y.data(), static_cast<std::int64_t>(y.size()),
                             omega.data(), values.data()));
    std::string csv = "omega,value\n";
    for (std::size_t j = 0; j < m; ++j)
      csv += format_double(omega[j]) + "," + format_double(values[j]) + "\n";
    write_output(out_path, csv);
    return 0;
  }

  if (spec_cmd->parsed()) {
    if (spec_model.theta.empty()) die(kExitInvalid, "spectrum: --theta is required");
    scarma_model* model = make_model(spec_model);
    const double pi = 3.14159265358979323846;
    std::vector<double> omega(static_cast<std::size_t>(spec_points));
    for (int i = 0; i < spec_points; ++i)
      omega[static_cast<std::size_t>(i)] = -pi + 2.0 * pi * (i + 0.5) / spec_points;
    std::vector<double> fi(omega.size()), ft(omega.size());
    check(scarma_spectrum(model, spec_sigma_l2, omega.data(), spec_points,
                          fi.data(), ft.data()));
    scarma_model_free(model);
    std::string csv = "omega,f_integral,f_pi\n";
    for (std::size_t i = 0; i < omega.size(); ++i)
      csv += format_double(omega[i]) + "," + format_double(fi[i]) + "," +
             format_double(ft[i]) + "\n";
    write_output(out_path, csv);
    return 0;
  }

  if (wfit->parsed()) {
    const std::vector<double> y = read_series_csv(wfit_in);
    int objective = 0;
    if (wfit_objective == "auto")
      objective = wfit_alpha < 2.0 ? 1 : 0;
    else if (wfit_objective == "adjusted")
      objective = 0;
    else if (wfit_objective == "alpha")
      objective = 1;
    else if (wfit_objective == "classical")
      objective = 2;
    else
      die(kExitInvalid, "whittle-fit: unknown objective " + wfit_objective);
    char* result = nullptr;
    check(scarma_whittle_fit(wfit_family.c_str(), wfit_delta, objective,
                             wfit_alpha, wfit_sigma_l2, y.data(),
                             static_cast<std::int64_t>(y.size()), &result));
    std::string text = result;
    scarma_string_free(result);
    write_output(out_path, text + "\n");
    return 0;
  }

  if (gfit->parsed()) {
    const std::vector<double> y = read_series_csv(gfit_in);
    char* result = nullptr;
    check(scarma_garcia_fit(gfit_family.c_str(), gfit_delta, y.data(),
                            static_cast<std::int64_t>(y.size()), &result));
    std::string text = result;
    scarma_string_free(result);
    write_output(out_path, text + "\n");
    return 0;
  }

  if (bgrid->parsed()) {
    char* csv = nullptr;
    check(scarma_beta_grid(bg_family.c_str(), bg_delta, bg_theta0.data(),
                           static_cast<int>(bg_theta0.size()), bg_alpha,
                           bg_coord, bg_from, bg_to, bg_points, &csv));
    std::string text = csv;
    scarma_string_free(csv);
    write_output(out_path, text);
    return 0;
  }

  if (lsim->parsed()) {
    const auto grid = parse_grid(ls_grid_text);
    if (grid.empty()) die(kExitInvalid, "limit-sim: empty grid");
    const int dim = static_cast<int>(ls_theta0.size());
    std::vector<double> flat;
    for (const auto& v : grid) {
      if (static_cast<int>(v.size()) != dim)
        die(kExitInvalid, "limit-sim: grid point dimension mismatch");
      flat.insert(flat.end(), v.begin(), v.end());
    }
    char* csv = nullptr;
    check(scarma_limit_sim(ls_family.c_str(), ls_delta, ls_theta0.data(), dim,
                           flat.data(), static_cast<int>(grid.size()), ls_alpha,
                           ls_sigma, ls_reps, seed, &csv));
    std::string text = csv;
    scarma_string_free(csv);
    write_output(out_path, text);
    return 0;
  }

  if (alim->parsed()) {
    double scale = 0.0, skew = 0.0;
    check(scarma_acvf_limit(al_family.c_str(), al_delta, al_theta0.data(),
                            static_cast<int>(al_theta0.size()), al_alpha,
                            al_sigma, al_lag, &scale, &skew));
    json j;
    j["lag"] = al_lag;
    j["scale"] = scale;
    j["skew"] = skew;
    write_output(out_path, j.dump(2) + "\n");
    return 0;
  }

  if (expr->parsed()) {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) die(kExitInvalid, "cannot open config " + config_path);
      try {
        in >> cfg;
      } catch (const std::exception& e) {
        die(kExitInvalid, std::string("bad config JSON: ") + e.what());
      }
    }
    // command-line flags override config keys
    if (!ex_family.empty()) cfg["family"] = ex_family;
    if (!ex_theta0.empty()) cfg["theta0"] = ex_theta0;
    if (ex_alpha >= 0.0) cfg["alpha"] = ex_alpha;
    if (ex_sigma >= 0.0) cfg["sigma"] = ex_sigma;
    if (ex_delta >= 0.0) cfg["delta"] = ex_delta;
    if (!ex_nlist.empty()) cfg["n_list"] = ex_nlist;
    if (ex_reps >= 0) cfg["replications"] = ex_reps;
    if (!ex_estimators.empty()) cfg["estimators"] = ex_estimators;
    if (ex_step >= 0.0) cfg["sim_step"] = ex_step;
    if (ex_burn >= 0.0) cfg["sim_burn_in"] = ex_burn;
    if (!ex_method.empty()) cfg["sim_method"] = ex_method;
    if (app.count("--seed")) cfg["seed"] = seed;
    if (app.count("--threads")) cfg["threads"] = threads;

    std::string target = out_path;
    if (target.empty() && cfg.contains("out") && cfg["out"].is_string())
      target = cfg["out"].get<std::string>();

    char* report = nullptr;
    char* summary = nullptr;
    check(scarma_experiment_run(cfg.dump().c_str(), &report, &summary));
    std::string report_text = report, summary_text = summary;
    scarma_string_free(report);
    scarma_string_free(summary);

    if (target.empty() || target == "-") {
      std::cout << summary_text;
    } else {
      write_output(target + ".json", report_text);
      write_output(target + ".csv", summary_text);
      std::cerr << "wrote " << target << ".json and " << target << ".csv\n";
    }
    return 0;
  }

  return kExitInvalid;
}
