#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sz/disc.hpp"
#include "sz/envelope.hpp"
#include "sz/oracle.hpp"

namespace sz {

// ---------------------------------------------------------------------------
// Polynomial-hull membership evidence. The compact K is the closure of the
// primitive union of a SetGeometry (points are passed as tiny balls). The
// test plays two independent certificates against each other:
//
//   * membership evidence: for every delta in a decreasing schedule, an
//     analytic disc through the query point whose boundary lies in the
//     delta-neighbourhood of K and whose functional value is below eps —
//     finite schedules give evidence, not proof, and the verdict name
//     says so;
//   * exclusion: a polynomial p with |p(a)| > (1 + 1e-9) * max |p| over
//     boundary samples of K, which certifies a outside the hull (up to the
//     sampling of K).
//
// The two certificates can never legitimately coexist; if both validate,
// hull_test throws std::logic_error rather than pick a side.
// ---------------------------------------------------------------------------

enum class HullStatus { in_hull_evidence, not_in_hull, inconclusive };

struct HullLevelCertificate {
  double delta = 0.0;            // neighbourhood radius of this level
  double eps = 0.0;              // threshold the value was tested against
  double value = 0.0;            // disc-functional bound at the query point
  EnvelopeResult certificate;    // winning disc on the shrunk neighbourhood
  double center_error = 0.0;     // ||f(0) - a|| of the certificate disc
  double fraction_inside = 0.0;  // independent boundary check on U_delta
  bool ok = false;  // certificate present, value < eps, center within 1e-9,
                    // boundary fraction exactly 1
};

struct HullPolyCertificate {
  Eigen::VectorXcd coefficients;  // ascending, monic
  double at_point = 0.0;          // |p(a)|
  double over_samples = 0.0;      // max |p| over the K boundary samples
  bool separating = false;        // at_point > (1 + 1e-9) * over_samples
  // p vanishes on every sample but not at a (over_samples == 0): the
  // sampled Chebyshev problem is degenerate and the separation is as strong
  // as the sampling allows.
  bool degenerate = false;
};

struct HullOptions {
  double eps = 0.05;
  // Strictly decreasing neighbourhood radii; empty selects
  // {0.1, 0.05, 0.02, 0.01} * diameter(K).
  std::vector<double> schedule;
  // Disc families searched on each neighbourhood (default: ball family).
  FamilySelection families;
  // Boundary samples per primitive for the polynomial side (ball circles and
  // box perimeters; the hull of a union is decided on primitive boundaries
  // by the maximum principle).
  int boundary_samples = 1 << 10;
  int poly_degree = 6;       // degree of the separating-polynomial search
  PolyLowerOptions poly;     // budget and seed of that search
  int check_samples = 1 << 12;  // grid of the independent certificate check
};

struct HullVerdict {
  HullStatus status = HullStatus::inconclusive;
  std::vector<HullLevelCertificate> levels;  // one per schedule entry
  HullPolyCertificate poly;
  bool poly_available = false;  // polynomial side runs on planar K only
};

// Membership evidence for the query point a against the hull of K.
//
// Disc side: each level runs the envelope on K inflated by
// delta * (1 - 1e-6) — the slight shrink keeps certified boundaries
// strictly inside the delta-neighbourhood — and then re-checks the winning
// certificate's boundary against the full neighbourhood. Levels evaluate in
// parallel and merge by schedule index.
//
// Polynomial side (planar K): a separating-polynomial search on boundary
// samples of the primitives, re-scored by direct evaluation.
//
// Verdict: not_in_hull on a separating polynomial; in_hull_evidence when
// every level certifies; inconclusive otherwise, carrying both partial
// records. Throws std::logic_error if both sides produce full certificates.
HullVerdict hull_test(const SetGeometry& K, const Eigen::VectorXcd& a,
                      const HullOptions& opts = {});

// Boundary samples of every primitive of a planar compact: per_primitive
// points on each ball circle and around each box perimeter. The sup of |p|
// over a union of primitives is attained on primitive boundaries, so these
// samples carry the polynomial separation problem.
std::vector<cplx> boundary_cloud(const SetGeometry& K, int per_primitive);

}  // namespace sz
