#include "sz/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "sz/threads.hpp"

namespace sz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start,
                          const SimplexOptions& opts) {
  require(static_cast<bool>(f), "objective must be callable");
  require(start.allFinite(), "start point must be finite");
  require(opts.max_iter >= 1, "max_iter must be at least 1");
  require(std::isfinite(opts.initial_step) && opts.initial_step > 0.0,
          "initial_step must be positive");
  require(opts.x_tol >= 0.0 && opts.f_tol >= 0.0, "tolerances must be nonnegative");

  const auto eval = [&f](const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };

  const Eigen::Index n = start.size();
  if (n == 0) return {start, eval(start), 0, true};

  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(n) + 1, start);
  std::vector<double> fv(static_cast<std::size_t>(n) + 1, 0.0);
  for (Eigen::Index i = 1; i <= n; ++i) xs[i][i - 1] += opts.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) fv[i] = eval(xs[i]);

  std::vector<Eigen::Index> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto resort = [&] {
    std::stable_sort(idx.begin(), idx.end(),
                     [&fv](Eigen::Index a, Eigen::Index b) { return fv[a] < fv[b]; });
  };
  resort();

  SimplexResult out;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Eigen::Index best = idx.front(), worst = idx.back();
    const Eigen::Index second = idx[idx.size() - 2];

    if (fv[best] == -kInf) {
      out.converged = true;
      break;
    }
    double diam = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i)
      diam = std::max(diam, (xs[i] - xs[best]).lpNorm<Eigen::Infinity>());
    const bool flat = std::isfinite(fv[worst]) &&
                      fv[worst] - fv[best] <= opts.f_tol * (1.0 + std::abs(fv[best]));
    if (diam <= opts.x_tol && flat) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (idx[i] != worst) centroid += xs[idx[i]];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fv[worst] = fe;
      } else {
        xs[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      xs[worst] = xr;
      fv[worst] = fr;
    } else {
      // Contract toward the better of the reflected and worst points.
      const Eigen::VectorXd xc = fr < fv[worst]
                                     ? (centroid + 0.5 * (xr - centroid)).eval()
                                     : (centroid + 0.5 * (xs[worst] - centroid)).eval();
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        xs[worst] = xc;
        fv[worst] = fc;
      } else {
        for (Eigen::Index i = 0; i <= n; ++i) {
          if (idx[i] == best) continue;
          xs[idx[i]] = xs[best] + 0.5 * (xs[idx[i]] - xs[best]);
          fv[idx[i]] = eval(xs[idx[i]]);
        }
      }
    }
    resort();
  }

  out.x = xs[idx.front()];
  out.value = fv[idx.front()];
  out.iterations = it;
  return out;
}

SimplexResult multistart_minimize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::vector<Eigen::VectorXd>& seeds, int restarts, std::uint64_t seed,
    double jitter_scale, const SimplexOptions& opts) {
  require(!seeds.empty(), "at least one seed point is required");
  require(restarts >= 1, "restarts must be at least 1");
  require(std::isfinite(jitter_scale) && jitter_scale >= 0.0,
          "jitter_scale must be nonnegative");
  const Eigen::Index dim = seeds.front().size();
  for (const Eigen::VectorXd& s : seeds) {
    require(s.size() == dim, "all seeds must have the same dimension");
    require(s.allFinite(), "seed points must be finite");
  }

  std::vector<SimplexResult> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    Eigen::VectorXd x0 = seeds[r % seeds.size()];
    if (r >= seeds.size()) {
      std::mt19937_64 rng(seed * 1000003ull + r);
      std::normal_distribution<double> gauss(0.0, 1.0);
      const double sigma = jitter_scale * (0.2 + 0.8 * static_cast<double>(r % 5) / 4.0);
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] += sigma * gauss(rng);
    }
    runs[r] = nelder_mead(f, x0, opts);
  });

  std::size_t win = 0;
  int total = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    total += runs[r].iterations;
    if (runs[r].value < runs[win].value) win = r;
  }
  SimplexResult out = runs[win];
  out.iterations = total;
  return out;
}

}  // namespace sz
