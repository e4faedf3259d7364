#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sz/hull.hpp"

using sz::Ball;
using sz::cplx;
using sz::HullOptions;
using sz::HullStatus;
using sz::HullVerdict;
using sz::SetGeometry;

namespace {

Eigen::VectorXcd pt(double re, double im = 0.0) {
  Eigen::VectorXcd z(1);
  z[0] = cplx(re, im);
  return z;
}

SetGeometry circle_stand_in() { return SetGeometry::single_ball(pt(0.0), 1.0); }

SetGeometry two_points_stand_in() {
  return SetGeometry::make({Ball{pt(0.0), 1e-3}, Ball{pt(4.0), 1e-3}}, {});
}

}  // namespace

TEST_CASE("center of the circle: membership evidence with zero-value discs") {
  const HullVerdict v = sz::hull_test(circle_stand_in(), pt(0.0));
  CHECK(v.status == HullStatus::in_hull_evidence);
  REQUIRE(v.levels.size() == 4);
  for (const sz::HullLevelCertificate& lv : v.levels) {
    CHECK(lv.ok);
    CHECK(lv.value == 0.0);
    CHECK(lv.center_error <= 1e-9);
    CHECK(lv.fraction_inside == 1.0);
    CHECK(lv.value < lv.eps);
  }
  // Default schedule is strictly decreasing and scaled by the diameter.
  for (std::size_t i = 1; i < v.levels.size(); ++i)
    CHECK(v.levels[i].delta < v.levels[i - 1].delta);
  // The polynomial side ran and, by the maximum principle, cannot separate
  // the center from the circle.
  CHECK(v.poly_available);
  CHECK(!v.poly.separating);
}

TEST_CASE("point outside the circle: polynomial exclusion") {
  HullOptions opts;
  opts.poly_degree = 1;  // the separating witness is already linear
  const HullVerdict v = sz::hull_test(circle_stand_in(), pt(2.0), opts);
  CHECK(v.status == HullStatus::not_in_hull);
  REQUIRE(v.poly_available);
  CHECK(v.poly.separating);
  // Best monic linear polynomial on the unit circle is w itself:
  // |p(2)| = 2 against a sup of 1 on the samples.
  CHECK(v.poly.at_point == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(v.poly.over_samples == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(v.poly.at_point > (1.0 + 1e-9) * v.poly.over_samples);
  // The disc side cannot certify membership at any level.
  for (const sz::HullLevelCertificate& lv : v.levels) CHECK(!lv.ok);
}

TEST_CASE("two point-like components: quadratic exclusion at the midpoint") {
  HullOptions opts;
  opts.poly_degree = 2;
  const HullVerdict v = sz::hull_test(two_points_stand_in(), pt(2.0), opts);
  CHECK(v.status == HullStatus::not_in_hull);
  REQUIRE(v.poly_available);
  CHECK(v.poly.separating);
  // w(w - 4) evaluates to -4 at the midpoint and to about 4e-3 on the
  // samples; the found witness must be at least as decisive in ratio.
  CHECK(v.poly.at_point >= 100.0 * v.poly.over_samples);
  for (const sz::HullLevelCertificate& lv : v.levels) CHECK(!lv.ok);
}

TEST_CASE("level values are monotone in the neighbourhood radius") {
  const HullVerdict v = sz::hull_test(circle_stand_in(), pt(2.0));
  REQUIRE(v.levels.size() == 4);
  for (std::size_t i = 1; i < v.levels.size(); ++i) {
    // Deltas decrease along the schedule, so neighbourhoods shrink and the
    // certified values may only grow.
    CHECK(v.levels[i].value >= v.levels[i - 1].value - 1e-12);
    CHECK(v.levels[i].certificate.has_certificate);
  }
  // Sanity: the level values are the single-ball answers log(2/(1+delta)).
  for (const sz::HullLevelCertificate& lv : v.levels) {
    const double expected = std::log(2.0 / (1.0 + lv.delta * (1.0 - 1e-6)));
    CHECK(std::abs(lv.value - expected) <= 1e-9);
  }
}

TEST_CASE("verdicts are deterministic") {
  HullOptions opts;
  opts.poly_degree = 2;
  const HullVerdict a = sz::hull_test(two_points_stand_in(), pt(2.0), opts);
  const HullVerdict b = sz::hull_test(two_points_stand_in(), pt(2.0), opts);
  CHECK(a.status == b.status);
  REQUIRE(a.poly.coefficients.size() == b.poly.coefficients.size());
  for (Eigen::Index k = 0; k < a.poly.coefficients.size(); ++k)
    CHECK(a.poly.coefficients[k] == b.poly.coefficients[k]);
}

TEST_CASE("higher-dimensional compacts run the disc side only") {
  Eigen::VectorXcd c(2);
  c << cplx(0.0, 0.0), cplx(0.0, 0.0);
  const SetGeometry K = SetGeometry::single_ball(c, 1.0);

  Eigen::VectorXcd inside(2);
  inside << cplx(0.1, 0.0), cplx(0.0, 0.2);
  const HullVerdict vi = sz::hull_test(K, inside);
  CHECK(vi.status == HullStatus::in_hull_evidence);
  CHECK(!vi.poly_available);

  Eigen::VectorXcd outside(2);
  outside << cplx(2.0, 0.0), cplx(0.0, 0.0);
  const HullVerdict vo = sz::hull_test(K, outside);
  // No polynomial oracle in two variables: exclusion cannot be certified,
  // and the disc values stay far above eps.
  CHECK(vo.status == HullStatus::inconclusive);
  CHECK(!vo.poly_available);
  for (const sz::HullLevelCertificate& lv : vo.levels) CHECK(!lv.ok);
}

TEST_CASE("hull inputs are validated") {
  const SetGeometry K = circle_stand_in();
  HullOptions bad;
  bad.eps = 0.0;
  CHECK_THROWS_AS(sz::hull_test(K, pt(0.0), bad), std::invalid_argument);

  HullOptions nondec;
  nondec.schedule = {0.1, 0.1};
  CHECK_THROWS_AS(sz::hull_test(K, pt(0.0), nondec), std::invalid_argument);

  HullOptions negd;
  negd.schedule = {0.1, -0.05};
  CHECK_THROWS_AS(sz::hull_test(K, pt(0.0), negd), std::invalid_argument);

  Eigen::VectorXcd wrong(2);
  wrong << cplx(0.0, 0.0), cplx(0.0, 0.0);
  CHECK_THROWS_AS(sz::hull_test(K, wrong), std::invalid_argument);

  Eigen::VectorXcd nan = pt(0.0);
  nan[0] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(sz::hull_test(K, nan), std::invalid_argument);

  HullOptions degree0;
  degree0.poly_degree = 0;
  CHECK_THROWS_AS(sz::hull_test(K, pt(0.0), degree0), std::invalid_argument);
}
