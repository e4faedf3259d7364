#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "sz/functionals.hpp"
#include "sz/glue.hpp"

using sz::Arc;
using sz::ArcPartition;
using sz::ClosedPolyDisc;
using sz::ClosedPolyLift;
using sz::cplx;
using sz::GluingSpec;
using sz::kPi;
using sz::kTwoPi;
using sz::Polynomial;
using sz::SetGeometry;

namespace {

Polynomial poly(std::vector<cplx> ascending) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(ascending.size()));
  for (std::size_t k = 0; k < ascending.size(); ++k)
    c[static_cast<Eigen::Index>(k)] = ascending[k];
  return Polynomial(c);
}

Eigen::VectorXcd point1(cplx v) {
  Eigen::VectorXcd p(1);
  p[0] = v;
  return p;
}

ClosedPolyLift constant_lift(const Eigen::VectorXcd& affine) {
  std::vector<Polynomial> comps;
  comps.push_back(Polynomial::constant(1.0));
  for (Eigen::Index j = 0; j < affine.size(); ++j)
    comps.push_back(Polynomial::constant(affine[j]));
  return ClosedPolyLift::make(std::move(comps));
}

Arc half_circle_right() { return Arc::from_angles(-kPi / 2.0, kPi / 2.0); }

}  // namespace

TEST_CASE("alpha: value at the origin, contraction, trivial cases") {
  Arc a = half_circle_right();
  cplx at0 = sz::alpha(a, 2, 0.0);
  CHECK(std::abs(at0.real() - std::exp(-1.0)) < 1e-12);
  CHECK(std::abs(at0.imag()) < 1e-12);

  Arc b = Arc::from_angles(0.3, 0.3 + kTwoPi * 0.7);
  cplx bt0 = sz::alpha(b, 7, 0.0);
  CHECK(std::abs(bt0 - std::exp(-7.0 * 0.3)) < 1e-12);

  std::mt19937 rng(15);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    cplx z = std::polar(0.999 * std::sqrt(unit(rng)), kTwoPi * unit(rng));
    CHECK(std::abs(sz::alpha(a, 5, z)) < 1.0);
    CHECK(sz::alpha(a, 0, z) == cplx(1.0, 0.0));
  }
  CHECK(sz::alpha(Arc::full_circle(), 9, cplx(0.3, 0.2)) == cplx(1.0, 0.0));

  CHECK_THROWS_AS(sz::alpha(a, 2, cplx(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(sz::alpha(a, -1, cplx(0.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(sz::alpha(Arc{0.2, 0.2}, 2, cplx(0.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("alpha boundary limits are unimodular on the arc, e^{-m} off it") {
  Arc a = half_circle_right();
  for (int m : {1, 5, 20}) {
    for (double theta : {0.0, 0.37, -0.8, 1.5}) {  // inside the open arc
      cplx v = sz::alpha_boundary(a, m, theta);
      CHECK(std::abs(std::abs(v) - 1.0) < 1e-9);
    }
    for (double theta : {kPi, 2.0, -2.2}) {  // off the closed arc
      cplx v = sz::alpha_boundary(a, m, theta);
      CHECK(std::abs(std::abs(v) - std::exp(-double(m))) < 1e-9);
    }
  }
  CHECK(sz::alpha_boundary(a, 0, 2.0) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(sz::alpha_boundary(a, 3, kPi / 2.0), std::invalid_argument);

  // Just inside the circle the moduli are within 1e-6 for small m.
  const double r = 1.0 - 1e-6;
  CHECK(std::abs(std::abs(sz::alpha(a, 1, r)) - 1.0) < 1e-6);
  CHECK(std::abs(std::abs(sz::alpha(a, 1, -r)) - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("alpha moments: arc mass at k = 0, decay in m, half-circle law") {
  for (double frac : {0.5, 0.25, 0.8}) {
    Arc a = Arc::from_angles(0.4, 0.4 + kTwoPi * frac);
    for (int m : {1, 10}) {
      std::vector<cplx> mom = sz::alpha_moments(a, m, 0);
      REQUIRE(mom.size() == 1);
      CHECK(std::abs(mom[0] - frac) < 1e-8);
    }
  }

  // Symmetric half circle: moment_k = sech(k m / 2) / 2 exactly.
  Arc half = half_circle_right();
  for (int m : {2, 10}) {
    std::vector<cplx> mom = sz::alpha_moments(half, m, 2);
    for (int k = 1; k <= 2; ++k)
      CHECK(std::abs(mom[static_cast<std::size_t>(k)] -
                     0.5 / std::cosh(0.5 * k * m)) < 1e-7);
  }

  double prev = 1.0;
  for (int m : {10, 50, 200}) {
    double mag = std::abs(sz::alpha_moments(half, m, 1)[1]);
    CHECK(mag < prev);
    prev = mag;
  }
  CHECK(prev < 0.05);

  // Moments depend only on the arc length, not its position.
  Arc rot = Arc::from_angles(1.1, 1.1 + kTwoPi * 0.3);
  Arc base = Arc::from_angles(0.0, kTwoPi * 0.3);
  std::vector<cplx> m1 = sz::alpha_moments(base, 5, 2);
  std::vector<cplx> m2 = sz::alpha_moments(rot, 5, 2);
  for (std::size_t k = 0; k < m1.size(); ++k) CHECK(m1[k] == m2[k]);

  for (cplx v : sz::alpha_moments(Arc::full_circle(), 7, 3))
    CHECK(v == cplx(1.0, 0.0));

  CHECK_THROWS_AS(sz::alpha_moments(half, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(sz::alpha_moments(half, 3, -1), std::invalid_argument);
}

TEST_CASE("norm-ratio check: constants pass, steep liftings fail") {
  sz::GClassReport flat = sz::g_class_check(
      ClosedPolyLift::make({poly({1.0}), poly({2.0}), poly({cplx(0, 3)})}));
  CHECK(flat.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.passes);

  sz::GClassReport steep =
      sz::g_class_check(ClosedPolyLift::make({poly({1.0}), poly({5.0, 5.0})}));
  CHECK(steep.max_ratio == doctest::Approx(std::sqrt(101.0)).epsilon(1e-6));
  CHECK(!steep.passes);

  CHECK_THROWS_AS(
      sz::g_class_check(ClosedPolyLift::make({poly({1.0}), poly({2.0})}), 100),
      std::invalid_argument);
}

TEST_CASE("ball discs: anchored at the point, boundary on the sphere") {
  sz::BallDiscResult d = sz::ball_disc(point1(2.0), point1(0.0), 1.0);
  CHECK(std::abs(d.j_value - std::log(2.0)) < 1e-15);
  CHECK(std::abs(sz::J_of(d.lifting).value - std::log(2.0)) < 1e-12);
  Eigen::VectorXcd v0 = d.lifting.eval(0.0);
  CHECK(std::abs(v0[0] - 1.0) < 1e-15);
  CHECK(std::abs(v0[1] - 2.0) < 1e-15);
  for (int i = 0; i < 64; ++i) {
    cplx p = d.lifting.affine(std::polar(1.0, kTwoPi * i / 64.0))[0];
    CHECK(std::abs(std::abs(p) - 1.0) < 1e-10);
  }
  CHECK(d.g_class.passes);
  CHECK(d.g_class.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sz::ball_radius_condition(point1(0.0), 1.0));

  // c = 0: the value grows like log ||z||.
  sz::BallDiscResult far = sz::ball_disc(point1(8.0), point1(0.0), 1.0);
  CHECK(std::abs(far.j_value - d.j_value - std::log(4.0)) < 1e-12);

  // Two variables: boundary on the sphere of B(c, r).
  Eigen::VectorXcd z2(2), c2(2);
  z2 << cplx(3.0, 0.0), cplx(0.0, 4.0);
  c2 << cplx(1.0, 0.0), cplx(0.0, 0.0);
  sz::BallDiscResult d2 = sz::ball_disc(z2, c2, 1.0);
  CHECK(std::abs(d2.j_value - 0.5 * std::log(20.0)) < 1e-12);
  CHECK((d2.lifting.affine(0.0) - z2).norm() < 1e-12);
  for (int i = 0; i < 64; ++i) {
    Eigen::VectorXcd p = d2.lifting.affine(std::polar(1.0, kTwoPi * i / 64.0));
    CHECK(std::abs((p - c2).norm() - 1.0) < 1e-10);
  }

  // An off-center ball big enough to break the norm-ratio condition.
  sz::BallDiscResult wide = sz::ball_disc(point1(5.0), point1(2.0), 1.5);
  CHECK(!sz::ball_radius_condition(point1(2.0), 1.5));
  CHECK(wide.g_class.max_ratio == doctest::Approx(std::sqrt(10.6)).epsilon(1e-4));
  CHECK(!wide.g_class.passes);

  CHECK_THROWS_AS(sz::ball_disc(point1(0.5), point1(0.0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sz::ball_disc(point1(1.0), point1(0.0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sz::ball_disc(z2, point1(0.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sz::ball_disc(point1(2.0), point1(0.0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("arc partitions: coverage validation and seam snapping") {
  // Starts wrap into [0, 2 pi) and arcs sort by start, so the arc covering
  // angle 0 is the one that began at -pi/4.
  ArcPartition equal = ArcPartition::equal_arcs(4, -kPi / 4.0);
  REQUIRE(equal.size() == 4);
  CHECK(equal.arc_containing(0.0) == 3);
  CHECK(equal.arc_containing(kPi) == 1);
  for (double theta : {0.1, 2.0, 4.4, 6.1})
    CHECK(equal.arcs[static_cast<std::size_t>(equal.arc_containing(theta))]
              .contains(theta));
  std::vector<double> mids = equal.midpoints();
  CHECK(std::abs(mids[0] - kPi / 2.0) < 1e-12);

  CHECK_THROWS_AS(ArcPartition::make({Arc::from_angles(0.0, 2.0),
                                      Arc::from_angles(2.5, kTwoPi)}),
                  std::invalid_argument);  // lengths do not sum to 2 pi
  CHECK_THROWS_AS(ArcPartition::make({Arc::from_angles(0.0, 2.0),
                                      Arc::from_angles(2.00001, kTwoPi + 0.00001)}),
                  std::invalid_argument);  // gap at the seam
  CHECK_THROWS_AS(ArcPartition::make({Arc::from_angles(0.0, 4.0)}),
                  std::invalid_argument);  // single arc must be the full circle
  CHECK_THROWS_AS(ArcPartition::make({}), std::invalid_argument);
  CHECK(ArcPartition::make({Arc::full_circle()}).size() == 1);
}

TEST_CASE("gluing specs validate anchors, dimensions, and anchor values") {
  ClosedPolyDisc base = ClosedPolyDisc::constant(point1(2.0));
  ArcPartition arcs = ArcPartition::equal_arcs(2);
  std::vector<double> mids = arcs.midpoints();
  ClosedPolyLift ball = sz::ball_disc(point1(2.0), point1(0.0), 0.95).lifting;

  GluingSpec ok = GluingSpec::make(base, arcs, mids, {ball, ball}, 8);
  CHECK(ok.dimension() == 1);

  std::vector<double> swapped = {mids[1], mids[0]};
  CHECK_THROWS_AS(GluingSpec::make(base, arcs, swapped, {ball, ball}, 8),
                  std::invalid_argument);

  ClosedPolyLift wrong_anchor =
      sz::ball_disc(point1(2.1), point1(0.0), 0.95).lifting;
  CHECK_THROWS_AS(GluingSpec::make(base, arcs, mids, {ball, wrong_anchor}, 8),
                  std::invalid_argument);

  Eigen::VectorXcd z2(2), c2(2);
  z2 << 2.0, 0.0;
  c2 << 0.0, 0.0;
  ClosedPolyLift two_dim = sz::ball_disc(z2, c2, 0.95).lifting;
  CHECK_THROWS_AS(GluingSpec::make(base, arcs, mids, {ball, two_dim}, 8),
                  std::invalid_argument);

  CHECK_THROWS_AS(GluingSpec::make(base, arcs, mids, {ball, ball}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GluingSpec::make(base, arcs, {mids[0]}, {ball, ball}, 8),
                  std::invalid_argument);
}

TEST_CASE("stitching identities: constant attachments and full-circle arcs") {
  // Constant attachments reproduce the base disc exactly.
  ClosedPolyDisc base = ClosedPolyDisc::make({poly({2.0, 0.3})});
  ArcPartition arcs = ArcPartition::equal_arcs(3, 0.2);
  std::vector<double> mids = arcs.midpoints();
  std::vector<ClosedPolyLift> attached;
  for (double eta : mids)
    attached.push_back(constant_lift(base.eval(std::polar(1.0, eta))));
  sz::GluedDisc g = sz::glue(GluingSpec::make(base, arcs, mids, attached, 4));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    cplx z = std::polar(0.97 * unit(rng), kTwoPi * unit(rng));
    Eigen::VectorXcd v = g.eval(z);
    CHECK(std::abs(v[0] - 1.0) < 1e-15);
    CHECK(std::abs(v[1] - base.eval(z)[0]) < 1e-15);
  }
  Eigen::VectorXcd vb = g.boundary_eval(1.0);
  CHECK(std::abs(vb[1] - base.eval(std::polar(1.0, 1.0))[0]) < 1e-15);
  sz::GClassReport rep = sz::g_class_check(g);
  CHECK(rep.max_ratio == doctest::Approx(std::sqrt(6.29 / 3.89)).epsilon(1e-4));
  CHECK(rep.passes);

  // A full-circle arc makes alpha constant, so any attachment cancels.
  ClosedPolyDisc flat = ClosedPolyDisc::constant(point1(2.0));
  GluingSpec whole =
      GluingSpec::make(flat, ArcPartition{{Arc::full_circle()}}, {0.7},
                       {ClosedPolyLift::make({poly({1.0}), poly({2.0, 5.0})})},
                       6);
  sz::GluedDisc gw = sz::glue(whole);
  for (int i = 0; i < 10; ++i) {
    cplx z = std::polar(0.9 * unit(rng), kTwoPi * unit(rng));
    Eigen::VectorXcd v = gw.eval(z);
    CHECK(v[0] == cplx(1.0, 0.0));
    CHECK(v[1] == cplx(2.0, 0.0));
  }

  // The origin value is pinned to (1, base(0)) for every valid spec.
  ClosedPolyLift ball = sz::ball_disc(point1(2.0), point1(0.0), 0.95).lifting;
  ArcPartition two = ArcPartition::equal_arcs(2);
  sz::GluedDisc gb = sz::glue(
      GluingSpec::make(flat, two, two.midpoints(), {ball, ball}, 16));
  Eigen::VectorXcd v0 = gb.eval(0.0);
  CHECK(std::abs(v0[0] - 1.0) < 1e-14);
  CHECK(std::abs(v0[1] - 2.0) < 1e-14);
}

TEST_CASE("trivial constant spec: the reported bound is exactly zero") {
  SetGeometry X = SetGeometry::single_ball(point1(0.0), 1.0);
  ClosedPolyDisc base = ClosedPolyDisc::constant(point1(0.2));
  GluingSpec spec =
      GluingSpec::make(base, ArcPartition{{Arc::full_circle()}}, {1.3},
                       {constant_lift(point1(0.2))}, 3);
  sz::GluingBoundReport rep = sz::gluing_upper_bound(spec, X, 1 << 12);
  CHECK(rep.bound == 0.0);
  CHECK(rep.sum_attached_j == 0.0);
  CHECK(rep.fraction_inside == 1.0);
  CHECK(rep.valid);
  CHECK(rep.worst_margin == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(rep.max_attached_distance == 0.0);
  CHECK(rep.skipped_fraction == 0.0);

  CHECK_THROWS_AS(sz::gluing_upper_bound(spec, X, 1000), std::invalid_argument);
}

TEST_CASE("two arcs onto one ball: bound converges to the attached value") {
  SetGeometry X = SetGeometry::single_ball(point1(0.0), 1.0);
  ClosedPolyDisc base = ClosedPolyDisc::constant(point1(2.0));
  ArcPartition arcs = ArcPartition::equal_arcs(2);
  ClosedPolyLift ball = sz::ball_disc(point1(2.0), point1(0.0), 0.95).lifting;
  const double target = std::log(2.0 / 0.95);

  double dist_prev = 1e9;
  for (int m : {8, 16, 32}) {
    GluingSpec spec =
        GluingSpec::make(base, arcs, arcs.midpoints(), {ball, ball}, m);
    sz::GluingBoundReport rep = sz::gluing_upper_bound(spec, X, 1 << 14);
    CHECK(std::abs(rep.sum_attached_j - target) < 1e-12);
    CHECK(rep.max_attached_distance < dist_prev);
    dist_prev = rep.max_attached_distance;
    if (m >= 16) {
      CHECK(rep.fraction_inside == 1.0);
      CHECK(rep.valid);
      CHECK(rep.worst_margin < -0.04);
    }
    // Any valid stitched disc bounds the extremal value log 2 from above.
    CHECK(rep.bound > std::log(2.0) - 5e-3);
  }
  CHECK(dist_prev < 1e-4);

  GluingSpec fine =
      GluingSpec::make(base, arcs, arcs.midpoints(), {ball, ball}, 32);
  sz::GluingBoundReport rep = sz::gluing_upper_bound(fine, X, 1 << 16);
  CHECK(std::abs(rep.bound - target) < 5e-3);
}

TEST_CASE("disconnected target: stitched discs beat the one-ball value") {
  // Two unit balls; the query point 2 sits midway between them. The best
  // single-component disc gives log 2; a stitched disc built on a base curve
  // that visits both components does strictly better.
  std::vector<sz::Ball> balls = {{point1(0.0), 1.0}, {point1(4.0), 1.0}};
  SetGeometry X = SetGeometry::make(balls, {});
  ClosedPolyDisc base = ClosedPolyDisc::make({poly({2.0, 0.9})});

  // The affine projection divides by the stitched zeroth component, whose
  // modulus dips to 1/b - 1 near an attached disc's zeroth root, amplifying
  // the base oscillation; arcs must be fine enough to absorb that.
  const int k = 128;
  ArcPartition arcs = ArcPartition::equal_arcs(k, -kPi / 2.0);
  std::vector<double> mids = arcs.midpoints();
  std::vector<ClosedPolyLift> attached;
  for (double eta : mids) {
    cplx h = base.eval(std::polar(1.0, eta))[0];
    cplx center = std::abs(h - 0.0) < std::abs(h - 4.0) ? 0.0 : 4.0;
    attached.push_back(
        sz::ball_disc(point1(h), point1(center), 0.88).lifting);
  }
  GluingSpec spec = GluingSpec::make(base, arcs, mids, attached, 128);
  sz::GluingBoundReport rep = sz::gluing_upper_bound(spec, X, 1 << 16);

  CHECK(rep.fraction_inside == 1.0);
  CHECK(rep.valid);
  CHECK(rep.bound < std::log(2.0) - 0.02);
  CHECK(rep.bound > 0.3);
  CHECK(std::abs(rep.bound - rep.sum_attached_j) < 0.05);
}
