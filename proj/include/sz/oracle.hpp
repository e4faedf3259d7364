#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "sz/disc.hpp"

namespace sz {

// Independent reference values for the extremal function: an exact closed
// form for single-ball targets, a planar finite-difference Green-function
// solver, and a polynomial lower-bound search. Every result carries a method
// tag and a nonnegative error estimate (0 when the value is exact for the
// given inputs).

enum class OracleMethod { closed_form, pde, poly_lower };

struct OracleValue {
  double value = 0.0;
  OracleMethod method = OracleMethod::closed_form;
  double error_estimate = 0.0;
};

// log^+(||z - c|| / r) for a target that is a single ball of radius r at c.
// Exact (error 0); any other geometry is rejected.
OracleValue closed_form(const SetGeometry& X, const Eigen::VectorXcd& z);

// ---------------------------------------------------------------------------
// Planar Green function with pole at infinity, by five-point relaxation.
//
// Three staircase-masked Dirichlet problems are solved: spacing 2h on
// [-R,R]^2, spacing h on [-R,R]^2, and spacing 2h on [-2R,2R]^2, each with
// u = 0 at nodes inside the closed target and u = log|w| at nodes with
// |w| >= outer radius (the outer condition ignores the Robin constant, which
// biases the solution by O(1/log R)). The two equal-spacing runs share their
// node lattice near the target, so their difference isolates the truncation
// bias; the reported value removes the log-fitted bias from the fine run.
// The error estimate is the truncation difference plus the fine-vs-coarse
// discretization difference (first order: the staircase mask dominates).
//
// Each run is solved by multigrid V-cycles (red-black Gauss-Seidel smoothing,
// full-weighting restriction, bilinear prolongation, over-relaxation to
// tolerance on the coarsest level). The residual is the largest five-point
// defect divided by four; a run that fails to push it below residual_tol
// within the relaxation budget is flagged as diverged.
// ---------------------------------------------------------------------------

struct PdeOptions {
  int grid = 2000;            // fine-run intervals per side; multiple of 4
  double outer_radius = 0.0;  // 0 -> 4 * diameter(X); else explicit R
  double residual_tol = 1e-8; // convergence threshold on the residual
  long max_sweeps = 0;        // caps coarsest-level sweeps per visit and the
                              // number of correction cycles; 0 -> automatic
};

struct PdeResult {
  OracleValue oracle;                // method = pde
  bool converged = true;             // all relaxations reached residual_tol
  double value_fine = 0.0;           // spacing h on [-R,R]^2, interpolated at z
  double value_coarse = 0.0;         // spacing 2h on [-R,R]^2
  double value_far = 0.0;            // spacing 2h on [-2R,2R]^2
  double truncation_term = 0.0;      // |value_coarse - value_far|
  double discretization_term = 0.0;  // |value_fine - value_coarse|
};

// A solved field, reusable across evaluation points.
class PdeField {
 public:
  PdeResult at(cplx z) const;  // z must lie within half the outer radius
  double outer_radius() const;
  bool converged() const;
  long sweeps() const;  // total relaxation sweeps across all runs and levels

 private:
  friend PdeField pde_solve(const SetGeometry&, const PdeOptions&);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Solves the three grids for a bounded planar target (n = 1, balls/boxes).
// The target must lie within half the outer radius of the origin.
PdeField pde_solve(const SetGeometry& X, const PdeOptions& opts = {});

// Convenience single-point evaluation. Points inside the closed target
// report value 0 with error 0.
PdeResult pde_green(const SetGeometry& X, cplx z, const PdeOptions& opts = {});

// ---------------------------------------------------------------------------
// Polynomial lower bounds: max over monic degree-d polynomials p of
// (1/d) (log|p(z)| - log max over the samples of |p|). Any returned value is
// a lower bound for the extremal function of the sampled set, by the
// Bernstein-Walsh inequality; the certificate is the coefficient vector.
// ---------------------------------------------------------------------------

struct PolyLowerOptions {
  int budget = 24;      // optimizer restarts (first three: cluster/Leja/Chebyshev seeds)
  int max_iter = 800;   // simplex iterations per restart
  unsigned seed = 2026; // jitter stream for restarts beyond the seeds
};

struct PolyLowerResult {
  OracleValue oracle;             // method = poly_lower, error 0 (exact on samples)
  Eigen::VectorXcd coefficients;  // ascending, monic (leading coefficient 1)
  bool separation = false;        // p vanishes on every sample but not at z:
                                  // value is +infinity over the sampled set
};

// K: nonempty planar samples of a compact set. If the best polynomial
// vanishes on all samples and at z as well, the degenerate value -infinity
// is reported (with separation = false). Deterministic for a fixed seed.
PolyLowerResult poly_lower(const std::vector<cplx>& K, cplx z, int degree,
                           const PolyLowerOptions& opts = {});

}  // namespace sz
