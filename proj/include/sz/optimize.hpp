#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace sz {

// Derivative-free simplex minimization (Nelder-Mead). Used by the searches
// whose objectives are only piecewise smooth (roots crossing the unit
// circle, membership penalties), where gradients are unreliable.

struct SimplexOptions {
  int max_iter = 400;         // main-loop iterations
  double initial_step = 0.25; // edge length of the starting simplex
  double x_tol = 1e-10;       // stop when the simplex diameter falls below
  double f_tol = 1e-12;       // ... and the value spread is this small
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f from the given start. Deterministic: the iterate sequence
// depends only on the start point and options. NaN objective values are
// treated as +infinity; a best value of -infinity stops the search.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start,
                          const SimplexOptions& opts = {});

// Runs `restarts` simplex searches in parallel and returns the best result.
// Restart r starts from seeds[r % seeds.size()]; once every seed has been
// used verbatim, later restarts jitter theirs with Gaussian noise keyed by
// (seed, r), with a standard deviation cycling through multiples of
// jitter_scale. The merge is a serial minimum over restart index, so the
// outcome is independent of thread scheduling.
SimplexResult multistart_minimize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::vector<Eigen::VectorXd>& seeds, int restarts, std::uint64_t seed,
    double jitter_scale, const SimplexOptions& opts = {});

}  // namespace sz
