#pragma once

#include <vector>

#include "sz/disc.hpp"

namespace sz {

enum class FunctionalMethod { exact, quadrature };

// Decomposition record: for the exact method the two *_part contributions sum
// to the value; the removed_* entries report the common inner part divided
// out of the lifting before evaluation.
struct FunctionalDetail {
  double blaschke_part = 0.0;
  double singular_part = 0.0;
  double removed_blaschke = 0.0;
  double removed_singular = 0.0;
};

struct FunctionalValue {
  double value = 0.0;
  bool infinite = false;
  FunctionalMethod method = FunctionalMethod::exact;
  FunctionalDetail detail;
};

// J = -log|B(0)| with B the Blaschke factor of the zeroth component after the
// common Blaschke divisor of all components (projective multiplicity) is
// divided out. Zero when the zeroth component is zero-free; flagged infinite
// when the reduced zeroth component vanishes at the origin.
FunctionalValue J_of(const LiftedDisc& d);
FunctionalValue J_of(const ClosedPolyLift& d);

// I = -log|(B s)(0)| of the canonically reduced lifting: the Blaschke gcd and
// the singular meet of all components are removed, then the zeroth Blaschke
// value and remaining zeroth singular mass at 0 are combined. Always >= J.
FunctionalValue I_of(const LiftedDisc& d);

// Independent quadrature of I: trapezoid of the boundary integral of
// log|zeroth*| on the reduced lifting. Inner factors have unimodular boundary
// values a.e., so the integrand evaluates the Blaschke and outer factors at
// all grid angles (radius 1 - 1e-12) while the singular factor enters through
// the exact value at 0.
FunctionalValue I_of_quadrature(const LiftedDisc& d, int grid = 1 << 16);

// Negative mass: total of the smallest measure dominating every singular
// denominator.
FunctionalValue nu_of(const FactoredDisc& f);

// Riesz route to J: per-radius circle averages of the log-modulus of the
// (reduced) zeroth Blaschke factor minus its log-modulus at 0. Increases to J
// as the radius tends to 1. Radii must be strictly inside (0, 1) and
// nondecreasing. Entries are +infinity when J is infinite.
std::vector<double> J_via_riesz(const LiftedDisc& d,
                                const std::vector<double>& radii,
                                int grid = 1 << 14);

// Argument-principle zero count of p inside |z| = radius (cross-check for
// rational data); throws if a sample on the circle is exactly zero.
int winding_count(const Polynomial& p, double radius, int grid = 1 << 14);

}  // namespace sz
