#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sz/boundary.hpp"
#include "sz/polynomial.hpp"

namespace sz {

// ---------------------------------------------------------------------------
// Target-set geometry: a finite union of balls and boxes in C^n with a
// membership tolerance. "Inside" always means inside some primitive shrunk
// by the tolerance, so enlarging the tolerance never admits new points.
// ---------------------------------------------------------------------------

struct Ball {
  Eigen::VectorXcd center;
  double radius = 1.0;
};

// Per-coordinate rectangle: coordinate j ranges over
// [Re lo_j, Re hi_j] x [Im lo_j, Im hi_j].
struct Box {
  Eigen::VectorXcd lo;
  Eigen::VectorXcd hi;
};

struct SetGeometry {
  std::vector<Ball> balls;
  std::vector<Box> boxes;
  double tolerance = 0.0;

  static SetGeometry make(std::vector<Ball> balls, std::vector<Box> boxes,
                          double tolerance = 0.0);
  static SetGeometry single_ball(Eigen::VectorXcd center, double radius,
                                 double tolerance = 0.0);

  int dimension() const;
  std::size_t primitive_count() const { return balls.size() + boxes.size(); }

  // Signed margin: negative strictly inside some primitive, positive outside
  // all of them. Euclidean distance for balls, worst face offset for boxes.
  double margin(const Eigen::VectorXcd& p) const;
  bool contains(const Eigen::VectorXcd& p) const {
    return margin(p) < -tolerance;
  }

  // Upper bound on the diameter of the union (primitive circumballs).
  double diameter() const;

  // Every primitive grown by delta >= 0 (balls by radius, boxes by inset).
  SetGeometry inflated(double delta) const;
  // Every primitive shrunk by delta >= 0; collapsed primitives are dropped;
  // throws if none survive.
  SetGeometry shrunk(double delta) const;
};

// ---------------------------------------------------------------------------
// Factored discs: each coordinate function carried as B*h*s/t with finite
// Blaschke data B, outer data h, and atomic singular measures s (numerator)
// and t (denominator) with disjoint atom sets.
// ---------------------------------------------------------------------------

struct FactoredComponent {
  BlaschkeData blaschke;
  OuterSpec outer = OuterSpec::one();
  AtomicMeasure sing_num;  // the s factor
  AtomicMeasure sing_den;  // the t factor

  static FactoredComponent make(BlaschkeData blaschke, OuterSpec outer,
                                AtomicMeasure sing_num, AtomicMeasure sing_den);
  static FactoredComponent constant(cplx value);  // value must be nonzero

  cplx eval(cplx z) const;  // on the open unit disc
  bool atom_free() const { return sing_num.empty() && sing_den.empty(); }
};

struct FactoredDisc {
  std::vector<FactoredComponent> components;

  static FactoredDisc make(std::vector<FactoredComponent> components);
  int dimension() const { return static_cast<int>(components.size()); }
  Eigen::VectorXcd eval(cplx z) const;
  bool atom_free() const;
};

// Bounded lifting into C^{n+1}: every component has an empty singular
// denominator and a bounded outer part. Index 0 is the zeroth coordinate.
struct LiftedDisc {
  std::vector<FactoredComponent> components;

  static LiftedDisc make(std::vector<FactoredComponent> components);
  int dimension() const { return static_cast<int>(components.size()) - 1; }
  const FactoredComponent& zeroth() const { return components.front(); }
  Eigen::VectorXcd eval(cplx z) const;    // all n+1 coordinates
  Eigen::VectorXcd affine(cplx z) const;  // component j / component 0
  bool atom_free() const;
};

// Smallest sampled norm of the lifted map over a 2^12 grid of radii and
// angles. Diagnostic proxy for "never the zero vector"; small values flag a
// lifting whose components nearly vanish together.
double min_sample_norm(const LiftedDisc& d);

// Bounded lifting of a factored disc. With t_j the singular denominators,
// nu their smallest common dominating measure, and h_j split as u_j / v_j
// (u_j, v_j bounded outer), the lifting is
//   component 0:    v_1 ... v_n             with singular measure nu,
//   component j:    B_j u_j prod_{i!=j} v_i with measure (nu - t_j) + s_j.
// Throws if some outer part cannot be split into bounded halves. Grid outer
// parts appearing in several components must share one grid size.
LiftedDisc lift(const FactoredDisc& f);

// ---------------------------------------------------------------------------
// Closed polynomial discs: entire on a neighbourhood of the closed disc, so
// boundary values are exact evaluations on the unit circle.
// ---------------------------------------------------------------------------

struct ClosedPolyDisc {
  std::vector<Polynomial> components;

  static ClosedPolyDisc make(std::vector<Polynomial> components);
  static ClosedPolyDisc constant(const Eigen::VectorXcd& p);
  int dimension() const { return static_cast<int>(components.size()); }
  Eigen::VectorXcd eval(cplx z) const;
};

struct ClosedPolyLift {
  std::vector<Polynomial> components;  // n+1 entries, index 0 = zeroth

  static ClosedPolyLift make(std::vector<Polynomial> components);
  int dimension() const { return static_cast<int>(components.size()) - 1; }
  const Polynomial& zeroth() const { return components.front(); }
  Eigen::VectorXcd eval(cplx z) const;
  Eigen::VectorXcd affine(cplx z) const;
};

// Factored form of a closed polynomial lifting: roots strictly inside the
// circle become Blaschke data, the remaining factors the rational outer
// part. Throws on an identically zero component (not representable).
LiftedDisc to_lifted(const ClosedPolyLift& d);

// ---------------------------------------------------------------------------
// Boundary sampling and membership reports.
// ---------------------------------------------------------------------------

struct BoundarySampleReport {
  std::vector<Eigen::VectorXcd> samples;  // kept samples only
  std::vector<double> angles;             // angles of kept samples
  std::vector<double> skipped_angles;     // angles suppressed near atoms
  double radius = 0.0;
  int grid = 0;

  double skipped_fraction() const {
    return grid == 0 ? 0.0
                     : static_cast<double>(skipped_angles.size()) / grid;
  }
};

// Values at N uniform angles just inside the circle. Atom-free discs are
// sampled at radius 1 - 1e-6; discs carrying singular atoms are sampled at
// radius 1 - 1e-12, with angles near each atom skipped (window sized so the
// kept samples see the atom's factor within about 1e-3 of its boundary
// modulus). N must be a power of two, at least 8.
BoundarySampleReport boundary_samples(const FactoredDisc& d, int N);
BoundarySampleReport boundary_samples(const LiftedDisc& d, int N);

struct BoundaryMembershipReport {
  double fraction_inside = 0.0;  // of the kept samples
  double worst_margin = 0.0;     // largest signed margin over kept samples
  int grid = 0;
  double skipped_fraction = 0.0;
};

// Membership of the sampled boundary values in X. Lifted discs are projected
// to affine coordinates (component j / component 0) before the test; closed
// polynomial data is evaluated exactly on the unit circle with no skips.
BoundaryMembershipReport check_boundary_in(const FactoredDisc& d,
                                           const SetGeometry& X, int N);
BoundaryMembershipReport check_boundary_in(const LiftedDisc& d,
                                           const SetGeometry& X, int N);
BoundaryMembershipReport check_boundary_in(const ClosedPolyDisc& d,
                                           const SetGeometry& X, int N);
BoundaryMembershipReport check_boundary_in(const ClosedPolyLift& d,
                                           const SetGeometry& X, int N);

// True iff every component's outer part is bounded on the closed disc
// (rational without poles there, or finite grid log-modulus). The inner
// factors are unimodular and do not affect boundedness.
bool check_bounded_quotient(const FactoredDisc& d);
bool check_bounded_quotient(const LiftedDisc& d);

}  // namespace sz
