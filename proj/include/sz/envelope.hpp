#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "sz/disc.hpp"
#include "sz/glue.hpp"

namespace sz {

// ---------------------------------------------------------------------------
// Certified upper bounds on the extremal function V_X(z) over three nested
// disc families. Every reported value is witnessed by a disc (or stitching
// recipe) whose functional re-evaluates to the value within 1e-6; boundary
// membership is checked by sampling and reported, never assumed.
//
// Membership convention: certificates are validated against the closure of
// X. The exact inscribed-ball disc has its boundary on a sphere inside the
// closed set, and the closed-set value equals the open-set infimum for the
// fat targets handled here; the searched families (rational, glued) are
// pushed strictly inside, so their certificates have negative margins.
// ---------------------------------------------------------------------------

enum class DiscFamily { ball, rational, glued };

struct EnvelopeValidity {
  int grid = 0;                 // boundary samples behind fraction_inside
  double fraction_inside = 0.0; // fraction of sampled boundary values in X
  int budget = 0;               // optimizer restarts consumed
  int m = 0;                    // stitching sharpness (glued family only)
  std::uint64_t seed = 0;       // RNG seed the search was keyed by
};

struct EnvelopeResult {
  double value = 0.0;
  DiscFamily family = DiscFamily::ball;
  bool has_certificate = false;
  // Exactly one payload is meaningful, selected by `family`: lifted
  // polynomial discs certify the ball and rational families, a stitching
  // recipe certifies the glued family.
  ClosedPolyLift lift;
  GluingSpec glued;
  EnvelopeValidity validity;
};

// Minimum of log||z - c|| - log r over balls B(c, r) inscribed in a single
// primitive of X: primitive-inscribed candidates first, then simplex
// refinement of the center. Exact (value log||z - c*|| - log r*, certificate
// the degree-one disc through z with boundary on the sphere). z inside the
// closure of X returns 0 with the constant-disc certificate.
EnvelopeResult envelope_ball(const SetGeometry& X, const Eigen::VectorXcd& z);

struct RationalOptions {
  int degree = 2;          // top degree of every lifting component
  int restarts = 24;       // simplex restarts (the search budget)
  std::uint64_t seed = 2026;
  int samples = 1 << 12;   // boundary grid for the final membership check
};

// Derivative-free search over lifted polynomial discs (p_0, ..., p_n) with
// p_0(0) = 1 and p_j(0) = z_j. The objective is the pole contribution
// -sum log|root| over roots of p_0 in the open disc plus a penalty pushing
// sampled boundary values strictly inside X; feasibility is decided by an
// exact post-check, never by the penalty. Restart results are validated in
// ascending value order and the first disc whose sampled boundary lies
// entirely inside X (and whose p_0 has no root within 1e-10 of the circle)
// wins. If none validates, the result carries no certificate and an
// infinite value. Deterministic for a fixed seed.
EnvelopeResult envelope_rational(const SetGeometry& X,
                                 const Eigen::VectorXcd& z,
                                 const RationalOptions& opts = {});

struct GluedOptions {
  int restarts = 8;             // simplex restarts per stitching template
  std::uint64_t seed = 2026;
  int samples = 1 << 16;        // boundary grid for the final bound
  int search_samples = 1 << 12; // cheaper grid used inside the search
  int max_m = 256;              // cap on the stitching sharpness
  // Inward clearance factor for the attached balls explored by the
  // multi-component template; 0 selects the default 2% of the narrowest
  // primitive half-width. (The ball-reproducing template uses its own 1e-4
  // so the glued family stays within 1e-3 of the ball family.)
  double clearance = 0.0;
};

// Search over stitching recipes: a ball-reproducing template (equal arcs all
// attached to the best inscribed ball, sharpness escalated until the bound
// stabilizes) guarantees the glued family never trails the ball family by
// more than about 1e-3; when X has several primitives, an amplified template
// sends an affine base circle through the component layout and attaches
// nearest-primitive balls arc by arc, with the base radius, phase, and
// attachment clearance optimized. Only recipes whose sampled boundary lies
// entirely inside X are reported. Deterministic for a fixed seed.
EnvelopeResult envelope_glued(const SetGeometry& X, const Eigen::VectorXcd& z,
                              const GluedOptions& opts = {});

struct FamilySelection {
  bool ball = true;
  bool rational = false;
  bool glued = false;
  RationalOptions rational_opts;
  GluedOptions glued_opts;
};

// Minimum over the enabled families; the certificate of the winning family
// is retained. Families that fail to produce a certificate are skipped; if
// no family produces one the result has no certificate.
EnvelopeResult envelope_best(const SetGeometry& X, const Eigen::VectorXcd& z,
                             const FamilySelection& sel = {});

// Recomputes the winning certificate's functional: the J functional of the
// lifted disc for the ball and rational families, the stitched boundary
// integral for the glued family. Agrees with `value` within 1e-6 (exactly,
// for the call paths used to produce results). Throws if the result carries
// no certificate.
double reevaluate(const EnvelopeResult& r, const SetGeometry& X);

// Rectangular grid in the plane (dimension-one targets only).
struct GridSpec {
  double re0 = 0.0, re1 = 0.0;
  int nre = 1;
  double im0 = 0.0, im1 = 0.0;
  int nim = 1;
};

struct GridRow {
  cplx z;
  double value = 0.0;
  DiscFamily family = DiscFamily::ball;
  bool has_certificate = false;
};

// Per-point minimum over the enabled families, row-major over (im, re).
// Points evaluate in parallel; per-point searches are keyed by the selection
// seed and the point index, so the table is deterministic.
std::vector<GridRow> v_grid(const SetGeometry& X, const GridSpec& grid,
                            const FamilySelection& sel = {});

}  // namespace sz
