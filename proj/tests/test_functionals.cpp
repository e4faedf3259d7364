#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "sz/functionals.hpp"

using sz::AtomicMeasure;
using sz::BlaschkeData;
using sz::ClosedPolyLift;
using sz::cplx;
using sz::FactoredComponent;
using sz::FactoredDisc;
using sz::FunctionalMethod;
using sz::FunctionalValue;
using sz::kTwoPi;
using sz::LiftedDisc;
using sz::OuterSpec;
using sz::Polynomial;

namespace {

Polynomial poly(std::vector<cplx> ascending) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(ascending.size()));
  for (std::size_t k = 0; k < ascending.size(); ++k)
    c[static_cast<Eigen::Index>(k)] = ascending[k];
  return Polynomial(c);
}

LiftedDisc pole_and_atom_lifting(double a) {
  FactoredComponent zeroth = FactoredComponent::make(
      BlaschkeData::from({{cplx(a, 0.0), 1}}), OuterSpec::one(),
      AtomicMeasure::from({{0.0, 1.0}}), {});
  return LiftedDisc::make({zeroth, FactoredComponent::constant(1.0)});
}

double lattice_angle(int k) { return kTwoPi * static_cast<double>(k) / 16.0; }

// Random lifting whose atoms live on the 16-point angle lattice so measure
// joins and meets are exact; outer roots stay well off the circle.
LiftedDisc random_lifting(std::mt19937& rng, bool allow_shared) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = 1 + static_cast<int>(rng() % 3);
  const bool share_zero = allow_shared && unit(rng) < 0.4;
  const bool share_atom = allow_shared && unit(rng) < 0.4;
  const cplx shared_zero = std::polar(0.1 + 0.7 * unit(rng), kTwoPi * unit(rng));
  const int shared_atom_idx = static_cast<int>(rng() % 16);
  const double shared_atom_mass = 0.05 + 0.85 * unit(rng);

  std::vector<FactoredComponent> comps;
  for (int j = 0; j <= n; ++j) {
    std::vector<BlaschkeData::Zero> zeros;
    const int nz = static_cast<int>(rng() % 3);
    for (int k = 0; k < nz; ++k)
      zeros.push_back({std::polar(0.1 + 0.7 * unit(rng), kTwoPi * unit(rng)), 1});
    if (share_zero) zeros.push_back({shared_zero, 1});

    OuterSpec outer = OuterSpec::one();
    const int pick = static_cast<int>(rng() % 3);
    if (pick == 1) {
      outer = OuterSpec::rational(
          poly({1.0, cplx(0.3 * (unit(rng) - 0.5), 0.3 * (unit(rng) - 0.5))}),
          Polynomial::constant(1.0));
    } else if (pick == 2) {
      outer = OuterSpec::rational(
          poly({1.0, cplx(0.3 * (unit(rng) - 0.5), 0.3 * (unit(rng) - 0.5))}),
          poly({1.0, cplx(0.3 * (unit(rng) - 0.5), 0.3 * (unit(rng) - 0.5))}));
    }

    std::set<int> used;
    std::vector<AtomicMeasure::Atom> atoms;
    const int na = static_cast<int>(rng() % 3);
    for (int k = 0; k < na; ++k) {
      int idx = static_cast<int>(rng() % 16);
      if (idx == shared_atom_idx || !used.insert(idx).second) continue;
      atoms.push_back({lattice_angle(idx), 0.05 + 0.85 * unit(rng)});
    }
    if (share_atom) atoms.push_back({lattice_angle(shared_atom_idx), shared_atom_mass});
    comps.push_back(FactoredComponent::make(BlaschkeData::from(std::move(zeros)),
                                            outer, AtomicMeasure::from(atoms), {}));
  }
  return LiftedDisc::make(std::move(comps));
}

// Random factored disc with lattice atoms and disjoint numerator/denominator
// angle pools per component.
FactoredDisc random_factored(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = 1 + static_cast<int>(rng() % 3);
  std::vector<FactoredComponent> comps;
  for (int j = 0; j < n; ++j) {
    std::vector<BlaschkeData::Zero> zeros;
    if (rng() % 2)
      zeros.push_back({std::polar(0.1 + 0.7 * unit(rng), kTwoPi * unit(rng)), 1});
    OuterSpec outer =
        rng() % 2 ? OuterSpec::one()
                  : OuterSpec::rational(
                        poly({1.0, cplx(0.25 * (unit(rng) - 0.5),
                                        0.25 * (unit(rng) - 0.5))}),
                        Polynomial::constant(1.0));
    std::vector<AtomicMeasure::Atom> num_atoms, den_atoms;
    std::set<int> used_odd, used_even;
    const int nn = static_cast<int>(rng() % 3);
    for (int k = 0; k < nn; ++k) {
      int idx = 1 + 2 * static_cast<int>(rng() % 8);  // odd lattice slots
      if (used_odd.insert(idx).second)
        num_atoms.push_back({lattice_angle(idx), 0.05 + 0.85 * unit(rng)});
    }
    const int nd = static_cast<int>(rng() % 3);
    for (int k = 0; k < nd; ++k) {
      int idx = 2 * static_cast<int>(rng() % 8);  // even lattice slots
      if (used_even.insert(idx).second)
        den_atoms.push_back({lattice_angle(idx), 0.05 + 0.85 * unit(rng)});
    }
    comps.push_back(FactoredComponent::make(
        BlaschkeData::from(std::move(zeros)), outer,
        AtomicMeasure::from(std::move(num_atoms)),
        AtomicMeasure::from(std::move(den_atoms))));
  }
  return FactoredDisc::make(std::move(comps));
}

void check_exact_detail(const FunctionalValue& v) {
  REQUIRE(v.method == FunctionalMethod::exact);
  if (!v.infinite)
    CHECK(std::abs(v.detail.blaschke_part + v.detail.singular_part - v.value) < 1e-12);
}

}  // namespace

TEST_CASE("pole-and-atom lifting: J = log 2 and I = 1 + log 2") {
  LiftedDisc d = pole_and_atom_lifting(0.5);

  FunctionalValue j = sz::J_of(d);
  CHECK(!j.infinite);
  CHECK(std::abs(j.value - std::log(2.0)) < 1e-12);
  CHECK(j.detail.removed_blaschke == 0.0);
  check_exact_detail(j);

  FunctionalValue i = sz::I_of(d);
  CHECK(!i.infinite);
  CHECK(std::abs(i.value - (1.0 + std::log(2.0))) < 1e-12);
  CHECK(std::abs(i.detail.blaschke_part - std::log(2.0)) < 1e-12);
  CHECK(std::abs(i.detail.singular_part - 1.0) < 1e-12);
  CHECK(i.detail.removed_singular == 0.0);
  check_exact_detail(i);

  FunctionalValue q = sz::I_of_quadrature(d, 1 << 16);
  REQUIRE(q.method == FunctionalMethod::quadrature);
  CHECK(!q.infinite);
  CHECK(std::abs(q.value - i.value) < 5e-6);
}

TEST_CASE("common singular factor is removed: lifting (s, s z) has I = 0") {
  AtomicMeasure atom = AtomicMeasure::from({{0.0, 1.0}});
  FactoredComponent c0 = FactoredComponent::make({}, OuterSpec::one(), atom, {});
  FactoredComponent c1 = FactoredComponent::make(
      BlaschkeData::from({{cplx(0.0, 0.0), 1}}), OuterSpec::one(), atom, {});
  LiftedDisc d = LiftedDisc::make({c0, c1});

  FunctionalValue i = sz::I_of(d);
  CHECK(!i.infinite);
  CHECK(i.value == 0.0);
  CHECK(i.detail.removed_singular == doctest::Approx(1.0));
  FunctionalValue j = sz::J_of(d);
  CHECK(j.value == 0.0);
}

TEST_CASE("closed polynomial liftings with zero-free zeroth have I = J = 0") {
  ClosedPolyLift lift_poly = ClosedPolyLift::make(
      {poly({1.0}), poly({0.0, 1.0}), poly({-0.25, 0.0, 1.0})});
  FunctionalValue jp = sz::J_of(lift_poly);
  CHECK(jp.value == 0.0);
  LiftedDisc d = sz::to_lifted(lift_poly);
  CHECK(sz::J_of(d).value == 0.0);
  CHECK(sz::I_of(d).value == 0.0);
}

TEST_CASE("J from polynomial zeroth roots and the argument principle agree") {
  Polynomial p = poly({-0.5, 1.0}).times(poly({cplx(0.0, 0.3), 1.0}))
                     .times(poly({-2.0, 1.0}));
  ClosedPolyLift lift_poly = ClosedPolyLift::make({p, poly({1.0})});
  FunctionalValue j = sz::J_of(lift_poly);
  CHECK(!j.infinite);
  CHECK(std::abs(j.value - (-std::log(0.5) - std::log(0.3))) < 1e-10);

  CHECK(sz::winding_count(p, 1.0) == 2);
  CHECK(sz::winding_count(p, 0.35) == 1);
  CHECK(sz::winding_count(p, 0.1) == 0);
  CHECK(sz::winding_count(p, 3.0) == 3);
  CHECK_THROWS_AS(sz::winding_count(poly({-1.0, 1.0}), 1.0), std::invalid_argument);

  ClosedPolyLift at_infinity = ClosedPolyLift::make({poly({0.0, 1.0}), poly({1.0})});
  CHECK(sz::J_of(at_infinity).infinite);
}

TEST_CASE("ball-style Blaschke zero gives J = log distance - log radius") {
  // b = r / ||z - c|| with z = 4, c = 1, r = 2 in one variable.
  const double b = 2.0 / 3.0;
  FactoredComponent zeroth = FactoredComponent::make(
      BlaschkeData::from({{cplx(b, 0.0), 1}}), OuterSpec::one(), {}, {});
  LiftedDisc d = LiftedDisc::make({zeroth, FactoredComponent::constant(4.0)});
  FunctionalValue j = sz::J_of(d);
  CHECK(std::abs(j.value - (std::log(3.0) - std::log(2.0))) < 1e-12);
}

TEST_CASE("negative mass is the total of the join of denominators") {
  FactoredComponent c1 = FactoredComponent::make(
      {}, OuterSpec::one(), {}, AtomicMeasure::from({{0.0, 0.3}}));
  FactoredComponent c2 = FactoredComponent::make(
      {}, OuterSpec::one(), {},
      AtomicMeasure::from({{0.0, 0.2}, {kTwoPi / 4.0, 0.5}}));
  FunctionalValue nu = sz::nu_of(FactoredDisc::make({c1, c2}));
  CHECK(nu.value == doctest::Approx(0.8));
  check_exact_detail(nu);

  FactoredDisc plain = FactoredDisc::make(
      {FactoredComponent::constant(1.0), FactoredComponent::constant(2.0)});
  CHECK(sz::nu_of(plain).value == 0.0);
}

TEST_CASE("negative mass equals I of the lifting exactly on random discs") {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    FactoredDisc f = random_factored(rng);
    FunctionalValue nu = sz::nu_of(f);
    FunctionalValue i = sz::I_of(sz::lift(f));
    REQUIRE(!i.infinite);
    CHECK(nu.value == i.value);  // exact: lattice joins and meets are exact
  }
}

TEST_CASE("J never exceeds I, and equals it without singular numerators") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    LiftedDisc d = random_lifting(rng, true);
    FunctionalValue j = sz::J_of(d);
    FunctionalValue i = sz::I_of(d);
    REQUIRE(!j.infinite);
    REQUIRE(!i.infinite);
    CHECK(j.value <= i.value);
    check_exact_detail(j);
    check_exact_detail(i);
  }
  std::mt19937 rng2(78);
  for (int trial = 0; trial < 40; ++trial) {
    LiftedDisc d = random_lifting(rng2, false);
    std::vector<FactoredComponent> stripped;
    for (const auto& c : d.components)
      stripped.push_back(FactoredComponent::make(c.blaschke, c.outer, {}, {}));
    LiftedDisc atom_free = LiftedDisc::make(std::move(stripped));
    CHECK(sz::J_of(atom_free).value == sz::I_of(atom_free).value);
  }
}

TEST_CASE("I is invariant under common inner or unimodular multipliers") {
  FactoredComponent c0 = FactoredComponent::make(
      BlaschkeData::from({{cplx(0.4, 0.1), 1}}),
      OuterSpec::rational(poly({2.0, -1.0}), Polynomial::constant(1.0)),
      AtomicMeasure::from({{lattice_angle(3), 0.35}}), {});
  FactoredComponent c1 = FactoredComponent::make(
      BlaschkeData::from({{cplx(-0.2, 0.0), 1}}), OuterSpec::one(),
      AtomicMeasure::from({{lattice_angle(5), 0.6}}), {});
  LiftedDisc base = LiftedDisc::make({c0, c1});
  const double i0 = sz::I_of(base).value;

  // Unimodular constant on every component: outer parts never enter I.
  OuterSpec u = OuterSpec::rational(Polynomial::constant(std::polar(1.0, 0.7)),
                                    Polynomial::constant(1.0));
  std::vector<FactoredComponent> scaled;
  for (const auto& c : base.components)
    scaled.push_back(
        FactoredComponent::make(c.blaschke, c.outer.times(u), c.sing_num, {}));
  CHECK(sz::I_of(LiftedDisc::make(scaled)).value == i0);

  // One Blaschke factor applied to all components.
  const cplx extra(0.3, -0.5);
  std::vector<FactoredComponent> rotated;
  for (const auto& c : base.components) {
    std::vector<BlaschkeData::Zero> zeros = c.blaschke.zeros;
    zeros.push_back({extra, 1});
    rotated.push_back(FactoredComponent::make(BlaschkeData::from(zeros), c.outer,
                                              c.sing_num, {}));
  }
  FunctionalValue ib = sz::I_of(LiftedDisc::make(rotated));
  CHECK(ib.value == i0);
  CHECK(ib.detail.removed_blaschke == doctest::Approx(-std::log(std::abs(extra))));

  // One singular atom applied to all components.
  std::vector<FactoredComponent> shifted;
  for (const auto& c : base.components)
    shifted.push_back(FactoredComponent::make(
        c.blaschke, c.outer,
        sz::measure_add(c.sing_num, AtomicMeasure::from({{lattice_angle(7), 0.1}})),
        {}));
  FunctionalValue is = sz::I_of(LiftedDisc::make(shifted));
  CHECK(std::abs(is.value - i0) < 1e-12);
  CHECK(is.detail.removed_singular == doctest::Approx(0.1));
}

TEST_CASE("a common origin zero is a reparametrization artifact, not a pole") {
  FactoredComponent c0 = FactoredComponent::make(
      BlaschkeData::from({{cplx(0.0, 0.0), 1}}), OuterSpec::one(),
      AtomicMeasure::from({{0.0, 0.25}}), {});
  FactoredComponent c1 = FactoredComponent::make(
      BlaschkeData::from({{cplx(0.0, 0.0), 1}}), OuterSpec::one(), {}, {});
  LiftedDisc d = LiftedDisc::make({c0, c1});
  FunctionalValue j = sz::J_of(d);
  CHECK(!j.infinite);
  CHECK(j.value == 0.0);
  CHECK(sz::I_of(d).value == doctest::Approx(0.25));

  // An unshared origin zero means the disc really passes through infinity.
  FactoredComponent alone = FactoredComponent::make(
      BlaschkeData::from({{cplx(0.0, 0.0), 1}}), OuterSpec::one(), {}, {});
  LiftedDisc bad = LiftedDisc::make({alone, FactoredComponent::constant(1.0)});
  CHECK(sz::J_of(bad).infinite);
  CHECK(sz::I_of(bad).infinite);
  CHECK(sz::J_of(bad).value == std::numeric_limits<double>::infinity());
}

TEST_CASE("exact and quadrature I agree on rational-outer liftings") {
  std::mt19937 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    LiftedDisc d = random_lifting(rng, true);
    FunctionalValue exact = sz::I_of(d);
    REQUIRE(!exact.infinite);
    FunctionalValue quad = sz::I_of_quadrature(d, 1 << 16);
    CHECK(std::abs(quad.value - exact.value) < 5e-6);
  }
}

TEST_CASE("Riesz averages increase to J") {
  // Single zero at 0.5: the average at radius r is log(2r) for r > 1/2.
  LiftedDisc d = pole_and_atom_lifting(0.5);
  std::vector<double> radii = {0.9, 0.99, 0.999};
  std::vector<double> vals = sz::J_via_riesz(d, radii);
  REQUIRE(vals.size() == 3);
  for (std::size_t k = 0; k < radii.size(); ++k)
    CHECK(std::abs(vals[k] - std::log(2.0 * radii[k])) < 1e-9);
  CHECK(vals[0] < vals[1]);
  CHECK(vals[1] < vals[2]);

  std::vector<double> near = sz::J_via_riesz(d, {1.0 - 1e-5});
  CHECK(std::abs(near[0] - std::log(2.0)) < 1e-4);

  // Zero-free zeroth component: identically zero at every radius.
  LiftedDisc plain = LiftedDisc::make(
      {FactoredComponent::constant(1.0), FactoredComponent::constant(2.0)});
  for (double v : sz::J_via_riesz(plain, {0.5, 0.9})) CHECK(v == 0.0);

  CHECK_THROWS_AS(sz::J_via_riesz(d, {0.9, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(sz::J_via_riesz(d, {1.5}), std::invalid_argument);
}
