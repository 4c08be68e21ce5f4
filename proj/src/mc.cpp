#include "scarma/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "scarma/garcia.hpp"
#include "scarma/pathsim.hpp"
#include "scarma/whittle.hpp"

namespace scarma {

using nlohmann::json;

void ExperimentConfig::check() const {
  if (theta0.empty()) throw std::invalid_argument("experiment: theta0 missing");
  if (n_list.empty()) throw std::invalid_argument("experiment: n_list empty");
  if (replications < 1) throw std::invalid_argument("experiment: replications >= 1");
  if (!(alpha > 0.0) || alpha > 2.0)
    throw std::invalid_argument("experiment: alpha must be in (0,2]");
  if (!(sigma > 0.0)) throw std::invalid_argument("experiment: sigma must be > 0");
  if (sim_method != "euler" && sim_method != "exact")
    throw std::invalid_argument("experiment: sim_method must be euler or exact");
  for (const auto& e : estimators)
    if (e != "whittle" && e != "garcia")
      throw std::invalid_argument("experiment: unknown estimator " + e);
  const ParamFamily fam = ParamFamily::by_name(family);
  Eigen::Map<const Eigen::VectorXd> th(theta0.data(), static_cast<long>(theta0.size()));
  if (static_cast<int>(theta0.size()) != fam.dim)
    throw std::invalid_argument("experiment: theta0 dimension mismatch");
  if (!fam.box.contains(th))
    throw std::invalid_argument("experiment: theta0 outside the family box");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("family")) cfg.family = j["family"].get<std::string>();
  if (j.contains("theta0")) cfg.theta0 = j["theta0"].get<std::vector<double>>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<std::int64_t>>();
  if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
  if (j.contains("estimators"))
    cfg.estimators = j["estimators"].get<std::vector<std::string>>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("sim_step")) cfg.sim_step = j["sim_step"].get<double>();
  if (j.contains("sim_burn_in")) cfg.sim_burn_in = j["sim_burn_in"].get<double>();
  if (j.contains("sim_method")) cfg.sim_method = j["sim_method"].get<std::string>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  return cfg;
}

namespace {

json config_to_json_obj(const ExperimentConfig& cfg) {
  json j;
  j["family"] = cfg.family;
  j["theta0"] = cfg.theta0;
  j["alpha"] = cfg.alpha;
  j["sigma"] = cfg.sigma;
  j["delta"] = cfg.delta;
  j["n_list"] = cfg.n_list;
  j["replications"] = cfg.replications;
  j["estimators"] = cfg.estimators;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["sim_step"] = cfg.sim_step;
  j["sim_burn_in"] = cfg.sim_burn_in;
  j["sim_method"] = cfg.sim_method;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  return config_to_json_obj(*this).dump(2);
}

CellSummary summarize(const ExperimentCell& cell,
                      const std::vector<double>& theta0) {
  CellSummary s;
  s.estimator = cell.estimator;
  s.n = cell.n;
  const int d = static_cast<int>(theta0.size());
  s.coords.resize(d);

  std::vector<const ReplicationRecord*> ok;
  for (const auto& r : cell.records) {
    if (r.ok) ok.push_back(&r);
  }
  s.successes = static_cast<int>(ok.size());
  s.failures = static_cast<int>(cell.records.size()) - s.successes;
  if (ok.empty()) {
    s.empty = true;
    return s;
  }
  for (int c = 0; c < d; ++c) {
    double mean = 0.0;
    for (const auto* r : ok) mean += r->theta[static_cast<std::size_t>(c)];
    mean /= static_cast<double>(ok.size());
    double var = 0.0;
    for (const auto* r : ok) {
      const double dev = r->theta[static_cast<std::size_t>(c)] - mean;
      var += dev * dev;
    }
    CoordinateStats& cs = s.coords[static_cast<std::size_t>(c)];
    cs.mean = mean;
    cs.bias = std::abs(mean - theta0[static_cast<std::size_t>(c)]);
    if (ok.size() > 1) {
      cs.std_dev = std::sqrt(var / static_cast<double>(ok.size() - 1));
    } else {
      cs.std_dev = 0.0;
      cs.std_defined = false;
    }
  }
  return s;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.check();
  const auto t_start = std::chrono::steady_clock::now();

  const ParamFamily family = ParamFamily::by_name(cfg.family);
  Eigen::Map<const Eigen::VectorXd> theta0(cfg.theta0.data(),
                                           static_cast<long>(cfg.theta0.size()));
  const CarmaSpec spec = family.make(theta0, cfg.delta);

  StableParams noise;
  noise.alpha = cfg.alpha;
  noise.sigma = cfg.sigma;

  const bool run_whittle =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "whittle") !=
      cfg.estimators.end();
  const bool run_garcia =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "garcia") !=
      cfg.estimators.end();

  ExperimentReport report;
  report.config = cfg;

  int nthreads = cfg.threads > 0
                     ? cfg.threads
                     : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;

  for (const std::int64_t n : cfg.n_list) {
    ExperimentCell whittle_cell{"whittle", n, {}};
    ExperimentCell garcia_cell{"garcia", n, {}};
    whittle_cell.records.resize(static_cast<std::size_t>(cfg.replications));
    garcia_cell.records.resize(static_cast<std::size_t>(cfg.replications));

    std::atomic<int> next{0};
    auto worker = [&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= cfg.replications) return;

        SimConfig sim;
        sim.step = cfg.sim_step;
        sim.delta = cfg.delta;
        sim.n = n;
        sim.burn_in = cfg.sim_burn_in;
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));

        std::vector<double> y;
        std::string sim_failure;
        try {
          const SampledSeries series =
              cfg.sim_method == "exact"
                  ? exact_recursion(spec, noise, sim, rng)
                  : euler_maruyama(spec, noise, sim, rng);
          y = series.values;
        } catch (const std::exception& e) {
          sim_failure = std::string("simulation: ") + e.what();
        }

        if (run_whittle) {
          ReplicationRecord& rec = whittle_cell.records[static_cast<std::size_t>(r)];
          rec.rep = r;
          if (!sim_failure.empty()) {
            rec.failure_stage = sim_failure;
          } else {
            WhittleFitOptions opt;
            opt.kind = cfg.alpha < 2.0 ? WhittleKind::alpha_scaled
                                       : WhittleKind::adjusted;
            opt.alpha = cfg.alpha;
            const EstimationResult est = whittle_fit(y, cfg.delta, family, opt);
            bool finite = est.theta.allFinite();
            if (finite && est.failure.empty()) {
              rec.ok = true;
              rec.theta.assign(est.theta.data(), est.theta.data() + est.theta.size());
            } else {
              rec.failure_stage =
                  est.failure.empty() ? "non-finite estimate" : est.failure;
            }
          }
        }
        if (run_garcia) {
          ReplicationRecord& rec = garcia_cell.records[static_cast<std::size_t>(r)];
          rec.rep = r;
          if (!sim_failure.empty()) {
            rec.failure_stage = sim_failure;
          } else {
            const GarciaResult est = garcia_estimate(y, cfg.delta, family);
            const bool finite = !est.failed && est.theta.allFinite();
            if (finite) {
              rec.ok = true;
              rec.theta.assign(est.theta.data(), est.theta.data() + est.theta.size());
            } else {
              rec.failure_stage = est.failed ? to_string(est.stage) : "non-finite estimate";
            }
          }
        }
      }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    if (run_whittle) report.cells.push_back(std::move(whittle_cell));
    if (run_garcia) report.cells.push_back(std::move(garcia_cell));
  }

  for (const auto& cell : report.cells)
    report.summaries.push_back(summarize(cell, cfg.theta0));

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

std::string ExperimentReport::to_json() const {
  json j;
  j["config"] = config_to_json_obj(config);
  json jcells = json::array();
  for (const auto& cell : cells) {
    json jc;
    jc["estimator"] = cell.estimator;
    jc["n"] = cell.n;
    json recs = json::array();
    for (const auto& r : cell.records) {
      json jr;
      jr["rep"] = r.rep;
      jr["ok"] = r.ok;
      if (r.ok) {
        jr["theta"] = r.theta;
      } else {
        jr["failure_stage"] = r.failure_stage;
      }
      recs.push_back(std::move(jr));
    }
    jc["records"] = std::move(recs);
    jcells.push_back(std::move(jc));
  }
  j["cells"] = std::move(jcells);

  json jsum = json::array();
  for (const auto& s : summaries) {
    json js;
    js["estimator"] = s.estimator;
    js["n"] = s.n;
    js["successes"] = s.successes;
    js["failures"] = s.failures;
    js["empty"] = s.empty;
    json coords = json::array();
    for (const auto& c : s.coords) {
      json jc;
      jc["mean"] = c.mean;
      jc["bias"] = c.bias;
      jc["std"] = c.std_dev;
      jc["std_defined"] = c.std_defined;
      coords.push_back(std::move(jc));
    }
    js["coords"] = std::move(coords);
    jsum.push_back(std::move(js));
  }
  j["summaries"] = std::move(jsum);
  return j.dump(2);
}

std::string ExperimentReport::summary_csv() const {
  std::string out = "estimator,n,coord,theta0,mean,bias,std,successes,failures\n";
  char buf[256];
  for (const auto& s : summaries) {
    for (std::size_t c = 0; c < s.coords.size(); ++c) {
      if (s.empty) {
        std::snprintf(buf, sizeof(buf), "%s,%lld,%zu,%.17g,,,,0,%d\n",
                      s.estimator.c_str(), static_cast<long long>(s.n), c,
                      config.theta0[c], s.failures);
      } else {
        std::snprintf(buf, sizeof(buf), "%s,%lld,%zu,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
                      s.estimator.c_str(), static_cast<long long>(s.n), c,
                      config.theta0[c], s.coords[c].mean, s.coords[c].bias,
                      s.coords[c].std_dev, s.successes, s.failures);
      }
      out += buf;
    }
  }
  return out;
}

}  // namespace scarma
