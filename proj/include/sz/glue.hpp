#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sz/disc.hpp"

namespace sz {

// Partition of the circle into consecutive counterclockwise arcs with
// pairwise disjoint interiors covering the circle up to endpoints.
// Construction sorts by start angle and snaps each end to the next start.
struct ArcPartition {
  std::vector<Arc> arcs;

  static ArcPartition make(std::vector<Arc> raw);
  static ArcPartition equal_arcs(int k, double start = 0.0);
  int size() const { return static_cast<int>(arcs.size()); }
  std::vector<double> midpoints() const;
  // Index of the arc whose half-open [start, end) span contains theta.
  int arc_containing(double theta) const;
};

// The arc outer function exp(-m (1 - W)) with W the holomorphic completion
// of the harmonic measure of the arc; maps the disc into itself, alpha(0) =
// exp(-m (1 - a)) with a the arc fraction, m = 0 gives the constant 1.
cplx alpha(const Arc& a, int m, cplx z);
// Nontangential boundary limit at exp(i theta): unimodular on the arc
// interior, modulus exp(-m) off the closed arc; throws at arc endpoints.
cplx alpha_boundary(const Arc& a, int m, double theta);
// Quadrature moments int_A (alpha*)^k dsigma, k = 0..k_max, sigma normalized
// arclength. The k = 0 moment is the arc fraction; higher moments decay as m
// grows (weak convergence of the pushforward to the uniform measure).
std::vector<cplx> alpha_moments(const Arc& a, int m, int k_max);

struct GClassReport {
  double max_ratio = 0.0;  // max / min lifting norm over circle samples
  bool passes = false;     // max_ratio < 2
};

// Ratio of the largest to the smallest norm of the given lifting over
// circle samples. The report depends on the chosen lifting representative.
GClassReport g_class_check(const ClosedPolyLift& d, int grid = 1 << 12);

// Sufficient norm-ratio condition (1+(|c|+r)^2)/(1+(|c|-r)^2) < 4 for the
// disc attached to the ball of center c and radius r.
bool ball_radius_condition(const Eigen::VectorXcd& c, double r);

struct BallDiscResult {
  ClosedPolyLift lifting;  // value z at 0, boundary on the sphere of the ball
  GClassReport g_class;    // evaluated on the unimodular-zeroth representative
  double j_value = 0.0;    // log ||z - c|| - log r
};

// Degree-one lifting through z whose boundary lies on the sphere of the ball
// B(c, r); requires ||z - c|| > r. Its zeroth component has the single zero
// b = r / ||z - c||, so J = -log b.
BallDiscResult ball_disc(const Eigen::VectorXcd& z, const Eigen::VectorXcd& c,
                         double r);

// Recipe for stitching attached discs onto a base disc: one attached lifting
// per arc, anchored so that attached[j](0) = (1, base(e^{i anchor_j})).
struct GluingSpec {
  ClosedPolyDisc base;
  ArcPartition arcs;
  std::vector<double> anchors;
  std::vector<ClosedPolyLift> attached;
  int m = 1;

  static GluingSpec make(ClosedPolyDisc base, ArcPartition arcs,
                         std::vector<double> anchors,
                         std::vector<ClosedPolyLift> attached, int m);
  int dimension() const { return base.dimension(); }
};

// The stitched lifting g(z) = (1, base(z)) + sum_j (attached_j(alpha_j(z)) -
// attached_j(alpha_j(0))); bounded, with g(0) = (1, base(0)).
struct GluedDisc {
  GluingSpec spec;
  std::vector<cplx> alpha_at0;                       // alpha_j(0)
  std::vector<Eigen::VectorXcd> attached_at_alpha0;  // attached_j(alpha_j(0))

  int dimension() const { return spec.dimension(); }
  Eigen::VectorXcd eval(cplx z) const;  // |z| < 1
  // Boundary limit at exp(i theta); throws at arc endpoints.
  Eigen::VectorXcd boundary_eval(double theta) const;
};

GluedDisc glue(const GluingSpec& spec);

// Norm-ratio report for the stitched lifting over circle samples (samples in
// a small window around arc endpoints are skipped).
GClassReport g_class_check(const GluedDisc& d, int grid = 1 << 12);

struct GluingBoundReport {
  double bound = 0.0;            // mean log|zeroth| on the boundary, less log|zeroth(0)|
  double sum_attached_j = 0.0;   // sum_j a_j J(attached_j), the target value
  double fraction_inside = 0.0;  // fraction of kept samples inside X
  double worst_margin = 0.0;     // largest signed margin over kept samples
  // Largest distance from a kept boundary sample to the boundary circle of
  // its own arc's attached disc (upper-bounds the nearest-circle distance).
  double max_attached_distance = 0.0;
  double skipped_fraction = 0.0;
  int grid = 0;
  bool valid = false;  // fraction_inside == 1 over a nonempty sample set
};

// Boundary integral of log|zeroth| for the stitched disc, an upper bound for
// the extremal function at base(0) when every kept boundary sample lies in X.
GluingBoundReport gluing_upper_bound(const GluingSpec& spec,
                                     const SetGeometry& X, int N = 1 << 16);

}  // namespace sz
