#include "scarma/optim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace scarma {

namespace {

double guarded(const Objective& f, const Eigen::VectorXd& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                             const Box& box, const NelderMeadOptions& opt) {
  const int d = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;

  std::vector<Eigen::VectorXd> pts(d + 1);
  std::vector<double> vals(d + 1);
  pts[0] = box.project(x0);
  vals[0] = guarded(f, pts[0]);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd v = pts[0];
    double step = opt.init_step_frac * (box.hi[i] - box.lo[i]);
    if (v[i] + step > box.hi[i]) step = -step;
    v[i] += step;
    pts[i + 1] = box.project(v);
    vals[i + 1] = guarded(f, pts[i + 1]);
  }

  auto order = [&] {
    std::vector<int> idx(d + 1);
    for (int i = 0; i <= d; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (vals[a] != vals[b]) return vals[a] < vals[b];
      return lex_less(pts[a], pts[b]);
    });
    std::vector<Eigen::VectorXd> p2(d + 1);
    std::vector<double> v2(d + 1);
    for (int i = 0; i <= d; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };

  NelderMeadResult res;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    order();
    double diam = 0.0;
    for (int i = 1; i <= d; ++i) diam = std::max(diam, (pts[i] - pts[0]).norm());
    if (diam < opt.diam_tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) centroid += pts[i];
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd xr = box.project(centroid + alpha * (centroid - pts[d]));
    const double fr = guarded(f, xr);
    if (fr < vals[0]) {
      const Eigen::VectorXd xe = box.project(centroid + gamma * (centroid - pts[d]));
      const double fe = guarded(f, xe);
      if (fe < fr) {
        pts[d] = xe;
        vals[d] = fe;
      } else {
        pts[d] = xr;
        vals[d] = fr;
      }
      continue;
    }
    if (fr < vals[d - 1]) {
      pts[d] = xr;
      vals[d] = fr;
      continue;
    }
    const Eigen::VectorXd xc = box.project(centroid + rho * (pts[d] - centroid));
    const double fc = guarded(f, xc);
    if (fc < vals[d]) {
      pts[d] = xc;
      vals[d] = fc;
      continue;
    }
    for (int i = 1; i <= d; ++i) {
      pts[i] = box.project(pts[0] + shrink * (pts[i] - pts[0]));
      vals[i] = guarded(f, pts[i]);
    }
  }
  order();
  res.x = pts[0];
  res.value = vals[0];
  res.iterations = it;
  return res;
}

namespace {
// remembers the objective value at the start point so a run that never beat
// it can be recognized (degenerate objectives)
NelderMeadResult run_start(const Objective& f, const Eigen::VectorXd& x0,
                           const Box& box, const NelderMeadOptions& opt) {
  const double at_start = guarded(f, box.project(x0));
  NelderMeadResult r = nelder_mead(f, x0, box, opt);
  r.improved = r.value < at_start;
  return r;
}
}  // namespace

std::vector<Eigen::VectorXd> multistart_points(const Box& box) {
  const int d = box.dim();
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(box.center());

  long grid_size = 1;
  for (int i = 0; i < d; ++i) grid_size *= 3;
  auto grid_point = [&](long index) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) {
      const int digit = static_cast<int>(index % 3);
      index /= 3;
      x[i] = box.lo[i] + (0.25 + 0.25 * digit) * (box.hi[i] - box.lo[i]);
    }
    return x;
  };

  const int extra = std::min<long>(grid_size, 10);
  for (int i = 0; i < extra; ++i) {
    const long index = grid_size <= 10 ? i : (i * grid_size) / 10;
    Eigen::VectorXd x = grid_point(index);
    if ((x - starts[0]).norm() > 1e-12) starts.push_back(x);
  }
  return starts;
}

MultistartResult minimize(const Objective& f, const Box& box,
                          const NelderMeadOptions& opt, int threads) {
  const std::vector<Eigen::VectorXd> starts = multistart_points(box);
  std::vector<NelderMeadResult> runs(starts.size());

  if (threads <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i)
      runs[i] = run_start(f, starts[i], box, opt);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= starts.size()) return;
        runs[i] = run_start(f, starts[i], box, opt);
      }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(threads, static_cast<int>(starts.size()));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MultistartResult best;
  best.starts_used = static_cast<int>(starts.size());
  best.value = std::numeric_limits<double>::infinity();
  bool any_finite = false;
  bool any_improved = false;
  for (const auto& r : runs) {
    if (!std::isfinite(r.value)) continue;
    any_finite = true;
    any_improved = any_improved || r.improved;
    if (r.value < best.value ||
        (r.value == best.value && lex_less(r.x, best.x))) {
      best.x = r.x;
      best.value = r.value;
      best.converged = r.converged;
    }
  }
  if (!any_finite) {
    best.x = box.center();
    best.converged = false;
    best.failure = "objective not finite at any start";
  } else if (!any_improved) {
    // no start beat its own starting value: flat or degenerate objective
    best.x = box.center();
    best.value = runs[0].value;
    best.converged = false;
    best.failure = "objective did not improve from any start";
  }
  return best;
}

}  // namespace scarma
